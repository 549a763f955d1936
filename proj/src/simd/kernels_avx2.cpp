// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// a CPUID check, so the rest of the library stays baseline x86-64.

#include "qdhom/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace qdhom::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void cmatvec(const double* m_re, const double* m_im, std::size_t rows, std::size_t cols,
             const double* x_re, const double* x_im, double* y_re, double* y_im) {
    const std::size_t body = cols & ~std::size_t{3};
    for (std::size_t r = 0; r < rows; ++r) {
        const double* mr = m_re + r * cols;
        const double* mi = m_im + r * cols;
        __m256d acc_r = _mm256_setzero_pd();
        __m256d acc_i = _mm256_setzero_pd();
        for (std::size_t c = 0; c < body; c += 4) {
            const __m256d a = _mm256_loadu_pd(mr + c);
            const __m256d b = _mm256_loadu_pd(mi + c);
            const __m256d xr = _mm256_loadu_pd(x_re + c);
            const __m256d xi = _mm256_loadu_pd(x_im + c);
            acc_r = _mm256_fmadd_pd(a, xr, acc_r);
            acc_r = _mm256_fnmadd_pd(b, xi, acc_r);
            acc_i = _mm256_fmadd_pd(a, xi, acc_i);
            acc_i = _mm256_fmadd_pd(b, xr, acc_i);
        }
        double sr = hsum(acc_r);
        double si = hsum(acc_i);
        for (std::size_t c = body; c < cols; ++c) {
            sr += mr[c] * x_re[c] - mi[c] * x_im[c];
            si += mr[c] * x_im[c] + mi[c] * x_re[c];
        }
        y_re[r] = sr;
        y_im[r] = si;
    }
}

inline std::complex<double> cdot_tail(const double* ar, const double* ai, const double* br,
                                      const double* bi, std::size_t from, std::size_t k,
                                      double sr, double si) {
    for (std::size_t l = from; l < k; ++l) {
        sr += ar[l] * br[l] - ai[l] * bi[l];
        si += ar[l] * bi[l] + ai[l] * br[l];
    }
    return {sr, si};
}

void cgemm_nt(const double* a_re, const double* a_im, std::size_t m, const double* b_re,
              const double* b_im, std::size_t n, std::size_t k, std::complex<double>* c) {
    const std::size_t body = k & ~std::size_t{3};
    std::size_t i = 0;
    // 2x2 register blocks: two rows of A against two rows of B.
    for (; i + 1 < m; i += 2) {
        const double* a0r = a_re + i * k;
        const double* a0i = a_im + i * k;
        const double* a1r = a0r + k;
        const double* a1i = a0i + k;
        std::size_t j = 0;
        for (; j + 1 < n; j += 2) {
            const double* b0r = b_re + j * k;
            const double* b0i = b_im + j * k;
            const double* b1r = b0r + k;
            const double* b1i = b0i + k;
            __m256d r00 = _mm256_setzero_pd(), i00 = _mm256_setzero_pd();
            __m256d r01 = _mm256_setzero_pd(), i01 = _mm256_setzero_pd();
            __m256d r10 = _mm256_setzero_pd(), i10 = _mm256_setzero_pd();
            __m256d r11 = _mm256_setzero_pd(), i11 = _mm256_setzero_pd();
            for (std::size_t l = 0; l < body; l += 4) {
                const __m256d xr0 = _mm256_loadu_pd(a0r + l), xi0 = _mm256_loadu_pd(a0i + l);
                const __m256d xr1 = _mm256_loadu_pd(a1r + l), xi1 = _mm256_loadu_pd(a1i + l);
                const __m256d yr0 = _mm256_loadu_pd(b0r + l), yi0 = _mm256_loadu_pd(b0i + l);
                const __m256d yr1 = _mm256_loadu_pd(b1r + l), yi1 = _mm256_loadu_pd(b1i + l);
                r00 = _mm256_fnmadd_pd(xi0, yi0, _mm256_fmadd_pd(xr0, yr0, r00));
                i00 = _mm256_fmadd_pd(xi0, yr0, _mm256_fmadd_pd(xr0, yi0, i00));
                r01 = _mm256_fnmadd_pd(xi0, yi1, _mm256_fmadd_pd(xr0, yr1, r01));
                i01 = _mm256_fmadd_pd(xi0, yr1, _mm256_fmadd_pd(xr0, yi1, i01));
                r10 = _mm256_fnmadd_pd(xi1, yi0, _mm256_fmadd_pd(xr1, yr0, r10));
                i10 = _mm256_fmadd_pd(xi1, yr0, _mm256_fmadd_pd(xr1, yi0, i10));
                r11 = _mm256_fnmadd_pd(xi1, yi1, _mm256_fmadd_pd(xr1, yr1, r11));
                i11 = _mm256_fmadd_pd(xi1, yr1, _mm256_fmadd_pd(xr1, yi1, i11));
            }
            c[i * n + j] = cdot_tail(a0r, a0i, b0r, b0i, body, k, hsum(r00), hsum(i00));
            c[i * n + j + 1] = cdot_tail(a0r, a0i, b1r, b1i, body, k, hsum(r01), hsum(i01));
            c[(i + 1) * n + j] = cdot_tail(a1r, a1i, b0r, b0i, body, k, hsum(r10), hsum(i10));
            c[(i + 1) * n + j + 1] = cdot_tail(a1r, a1i, b1r, b1i, body, k, hsum(r11), hsum(i11));
        }
        for (; j < n; ++j) {
            const double* br = b_re + j * k;
            const double* bi = b_im + j * k;
            for (std::size_t row = 0; row < 2; ++row) {
                const double* ar = a_re + (i + row) * k;
                const double* ai = a_im + (i + row) * k;
                __m256d rr = _mm256_setzero_pd(), ii = _mm256_setzero_pd();
                for (std::size_t l = 0; l < body; l += 4) {
                    const __m256d xr = _mm256_loadu_pd(ar + l), xi = _mm256_loadu_pd(ai + l);
                    const __m256d yr = _mm256_loadu_pd(br + l), yi = _mm256_loadu_pd(bi + l);
                    rr = _mm256_fnmadd_pd(xi, yi, _mm256_fmadd_pd(xr, yr, rr));
                    ii = _mm256_fmadd_pd(xi, yr, _mm256_fmadd_pd(xr, yi, ii));
                }
                c[(i + row) * n + j] = cdot_tail(ar, ai, br, bi, body, k, hsum(rr), hsum(ii));
            }
        }
    }
    for (; i < m; ++i) {
        const double* ar = a_re + i * k;
        const double* ai = a_im + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* br = b_re + j * k;
            const double* bi = b_im + j * k;
            __m256d rr = _mm256_setzero_pd(), ii = _mm256_setzero_pd();
            for (std::size_t l = 0; l < body; l += 4) {
                const __m256d xr = _mm256_loadu_pd(ar + l), xi = _mm256_loadu_pd(ai + l);
                const __m256d yr = _mm256_loadu_pd(br + l), yi = _mm256_loadu_pd(bi + l);
                rr = _mm256_fnmadd_pd(xi, yi, _mm256_fmadd_pd(xr, yr, rr));
                ii = _mm256_fmadd_pd(xi, yr, _mm256_fmadd_pd(xr, yi, ii));
            }
            c[i * n + j] = cdot_tail(ar, ai, br, bi, body, k, hsum(rr), hsum(ii));
        }
    }
}

std::size_t hom_row(double n_t, const double* n_shift, const std::complex<double>* g,
                    std::size_t len, double* out, double* min_raw) {
    const auto* gd = reinterpret_cast<const double*>(g);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d nt = _mm256_set1_pd(n_t);
    const __m256d zero = _mm256_setzero_pd();
    __m256d lo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t clamped = 0;
    std::size_t k = 0;
    for (; k + 4 <= len; k += 4) {
        const __m256d g01 = _mm256_loadu_pd(gd + 2 * k);      // r0 i0 r1 i1
        const __m256d g23 = _mm256_loadu_pd(gd + 2 * k + 4);  // r2 i2 r3 i3
        // hadd gives (|g0|^2, |g2|^2, |g1|^2, |g3|^2); permute back to natural order.
        const __m256d sq = _mm256_permute4x64_pd(
            _mm256_hadd_pd(_mm256_mul_pd(g01, g01), _mm256_mul_pd(g23, g23)), 0xD8);
        const __m256d prod = _mm256_mul_pd(nt, _mm256_loadu_pd(n_shift + k));
        const __m256d v = _mm256_mul_pd(half, _mm256_sub_pd(prod, sq));
        lo = _mm256_min_pd(lo, v);
        const __m256d neg = _mm256_cmp_pd(v, zero, _CMP_LT_OQ);
        clamped += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(neg)));
        _mm256_storeu_pd(out + k, _mm256_max_pd(v, zero));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, lo);
    double lowest = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    for (; k < len; ++k) {
        const double re = g[k].real();
        const double im = g[k].imag();
        const double v = 0.5 * (n_t * n_shift[k] - (re * re + im * im));
        lowest = std::min(lowest, v);
        if (v < 0.0) {
            ++clamped;
            out[k] = 0.0;
        } else {
            out[k] = v;
        }
    }
    *min_raw = lowest;
    return clamped;
}

void axpy(double w, const double* x, double* acc, std::size_t len) {
    const __m256d wv = _mm256_set1_pd(w);
    std::size_t k = 0;
    for (; k + 4 <= len; k += 4) {
        _mm256_storeu_pd(acc + k,
                         _mm256_fmadd_pd(wv, _mm256_loadu_pd(x + k), _mm256_loadu_pd(acc + k)));
    }
    for (; k < len; ++k) acc[k] += w * x[k];
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t len) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= len; k += 8) {
        s0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(a + k)),
                             _mm256_loadu_pd(b + k), s0);
        s1 = _mm256_fmadd_pd(
            _mm256_mul_pd(_mm256_loadu_pd(w + k + 4), _mm256_loadu_pd(a + k + 4)),
            _mm256_loadu_pd(b + k + 4), s1);
    }
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; k < len; ++k) s += w[k] * a[k] * b[k];
    return s;
}

void convolve_full(const double* x, std::size_t nx, const double* kernel, std::size_t nk,
                   double* out) {
    std::fill(out, out + nx + nk - 1, 0.0);
    for (std::size_t j = 0; j < nk; ++j) axpy(kernel[j], x, out + j, nx);
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{Isa::avx2, cmatvec,      cgemm_nt,     hom_row,
                                   axpy,      weighted_dot, convolve_full};
    return &table;
}

}  // namespace qdhom::simd
