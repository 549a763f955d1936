#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qdhom::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Complex vector held as separate real and imaginary planes, the layout the
// SIMD kernels consume.
struct SplitVector {
    std::vector<double> re;
    std::vector<double> im;

    SplitVector() = default;
    explicit SplitVector(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
    std::size_t size() const { return re.size(); }
};

// Row-major block of complex row vectors in split layout.
struct SplitRows {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> re;
    std::vector<double> im;

    SplitRows() = default;
    SplitRows(std::size_t r, std::size_t c) : rows(r), cols(c), re(r * c, 0.0), im(r * c, 0.0) {}

    const double* row_re(std::size_t r) const { return re.data() + r * cols; }
    const double* row_im(std::size_t r) const { return im.data() + r * cols; }
    double* row_re(std::size_t r) { return re.data() + r * cols; }
    double* row_im(std::size_t r) { return im.data() + r * cols; }
};

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
SplitVector vectorize(const Matrix& m);
Matrix unvectorize(const double* re, const double* im, std::size_t dim);

}  // namespace qdhom::quantum
