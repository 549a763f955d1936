#include "qdhom/quantum/density_matrix.hpp"

#include "qdhom/error.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace qdhom::quantum {

SplitVector vectorize(const Matrix& m) {
    const auto n = static_cast<std::size_t>(m.size());
    SplitVector v(n);
    // Eigen storage is column-major, which is exactly column stacking.
    const Complex* data = m.data();
    for (std::size_t i = 0; i < n; ++i) {
        v.re[i] = data[i].real();
        v.im[i] = data[i].imag();
    }
    return v;
}

Matrix unvectorize(const double* re, const double* im, std::size_t dim) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    Complex* data = m.data();
    for (std::size_t i = 0; i < dim * dim; ++i) data[i] = {re[i], im[i]};
    return m;
}

double hermiticity_error(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double trace_deviation(const Matrix& m) { return std::abs(m.trace() - Complex(1.0, 0.0)); }

double min_eigenvalue(const Matrix& m) {
    const Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(Matrix rho, const StateTolerance& tol) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw ValidationError("density matrix must be square and non-empty");
    }
    if (!rho_.allFinite()) throw ValidationError("density matrix has non-finite entries");
    std::ostringstream msg;
    if (const double h = hermiticity_error(rho_); h > tol.hermiticity) {
        msg << "density matrix is not Hermitian (max |rho - rho^dag| = " << h << ")";
        throw ValidationError(msg.str());
    }
    if (const double t = trace_deviation(rho_); t > tol.trace) {
        msg << "density matrix trace deviates from 1 by " << t;
        throw ValidationError(msg.str());
    }
    if (const double e = min_eigenvalue(rho_); e < tol.min_eigenvalue) {
        msg << "density matrix is not positive semidefinite (min eigenvalue " << e << ")";
        throw ValidationError(msg.str());
    }
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) throw ValidationError("basis index out of range");
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return DensityMatrix(std::move(m));
}

Complex expectation(const Matrix& rho, const Matrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols() || op.rows() != op.cols()) {
        throw ValidationError("operator and state dimensions differ");
    }
    // Tr(O rho) without forming the product.
    return (op.transpose().cwiseProduct(rho)).sum();
}

Complex expectation(const DensityMatrix& rho, const Matrix& op) {
    return expectation(rho.matrix(), op);
}

}  // namespace qdhom::quantum
