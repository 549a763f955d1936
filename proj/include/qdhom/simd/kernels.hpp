#pragma once
// Data-parallel inner loops used by the propagation, correlation and
// convolution stages. Every kernel has a scalar reference implementation;
// an AVX2/FMA variant is compiled when the toolchain targets x86-64 and is
// selected at runtime when the CPU supports it.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

namespace qdhom::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;

    // y = M x for a row-major complex matrix held as split real/imag planes.
    void (*cmatvec)(const double* m_re, const double* m_im, std::size_t rows, std::size_t cols,
                    const double* x_re, const double* x_im, double* y_re, double* y_im);

    // c[i*n + j] = sum_l a[i][l] * b[j][l]   (no conjugation), rows of length k.
    void (*cgemm_nt)(const double* a_re, const double* a_im, std::size_t m,
                     const double* b_re, const double* b_im, std::size_t n, std::size_t k,
                     std::complex<double>* c);

    // out[k] = max(0, 0.5 * (n_t * n_shift[k] - |g[k]|^2)).
    // Returns the number of clamped entries; *min_raw receives the smallest unclamped value.
    std::size_t (*hom_row)(double n_t, const double* n_shift, const std::complex<double>* g,
                           std::size_t len, double* out, double* min_raw);

    // acc[k] += w * x[k]
    void (*axpy)(double w, const double* x, double* acc, std::size_t len);

    // sum_k w[k] * a[k] * b[k]
    double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t len);

    // Full discrete convolution, out has nx + nk - 1 entries.
    void (*convolve_full)(const double* x, std::size_t nx, const double* kernel, std::size_t nk,
                          double* out);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);
Isa detect_isa();

// Kernels used by the library. Defaults to detect_isa() on first use.
const KernelTable& active();

// Throws qdhom::ValidationError when the requested ISA is unavailable.
void select(Isa isa);

std::string_view to_string(Isa isa);
Isa parse_isa(std::string_view name);  // "scalar", "avx2" or "auto"

}  // namespace qdhom::simd
