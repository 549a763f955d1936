#include "qdhom/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace qdhom::simd {
namespace {

void cmatvec(const double* m_re, const double* m_im, std::size_t rows, std::size_t cols,
             const double* x_re, const double* x_im, double* y_re, double* y_im) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* mr = m_re + r * cols;
        const double* mi = m_im + r * cols;
        double sr = 0.0;
        double si = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            sr += mr[c] * x_re[c] - mi[c] * x_im[c];
            si += mr[c] * x_im[c] + mi[c] * x_re[c];
        }
        y_re[r] = sr;
        y_im[r] = si;
    }
}

void cgemm_nt(const double* a_re, const double* a_im, std::size_t m, const double* b_re,
              const double* b_im, std::size_t n, std::size_t k, std::complex<double>* c) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ar = a_re + i * k;
        const double* ai = a_im + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* br = b_re + j * k;
            const double* bi = b_im + j * k;
            double sr = 0.0;
            double si = 0.0;
            for (std::size_t l = 0; l < k; ++l) {
                sr += ar[l] * br[l] - ai[l] * bi[l];
                si += ar[l] * bi[l] + ai[l] * br[l];
            }
            c[i * n + j] = {sr, si};
        }
    }
}

std::size_t hom_row(double n_t, const double* n_shift, const std::complex<double>* g,
                    std::size_t len, double* out, double* min_raw) {
    std::size_t clamped = 0;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < len; ++k) {
        const double re = g[k].real();
        const double im = g[k].imag();
        const double v = 0.5 * (n_t * n_shift[k] - (re * re + im * im));
        lo = std::min(lo, v);
        if (v < 0.0) {
            ++clamped;
            out[k] = 0.0;
        } else {
            out[k] = v;
        }
    }
    *min_raw = lo;
    return clamped;
}

void axpy(double w, const double* x, double* acc, std::size_t len) {
    for (std::size_t k = 0; k < len; ++k) acc[k] += w * x[k];
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t len) {
    double s = 0.0;
    for (std::size_t k = 0; k < len; ++k) s += w[k] * a[k] * b[k];
    return s;
}

void convolve_full(const double* x, std::size_t nx, const double* kernel, std::size_t nk,
                   double* out) {
    std::fill(out, out + nx + nk - 1, 0.0);
    for (std::size_t j = 0; j < nk; ++j) axpy(kernel[j], x, out + j, nx);
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::scalar, cmatvec,      cgemm_nt,     hom_row,
                                   axpy,        weighted_dot, convolve_full};
    return table;
}

}  // namespace qdhom::simd
