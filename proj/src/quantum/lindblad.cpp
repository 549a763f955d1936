#include "qdhom/quantum/lindblad.hpp"

#include "qdhom/error.hpp"
#include "qdhom/quantum/density_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace qdhom::quantum {
namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

LindbladGenerator::LindbladGenerator(Matrix hamiltonian, std::vector<JumpOperator> jumps)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
    if (hamiltonian_.rows() == 0 || hamiltonian_.rows() != hamiltonian_.cols()) {
        throw ValidationError("Hamiltonian must be square and non-empty");
    }
    if (const double h = hermiticity_error(hamiltonian_); h > 1e-12) {
        throw ValidationError("Hamiltonian is not Hermitian (max deviation " + std::to_string(h) +
                              ")");
    }
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        const auto& j = jumps_[k];
        if (j.op.rows() != hamiltonian_.rows() || j.op.cols() != hamiltonian_.cols()) {
            throw ValidationError("jump operator " + std::to_string(k) +
                                  " does not match the Hamiltonian dimension");
        }
        if (!std::isfinite(j.rate) || j.rate < 0.0) {
            throw ValidationError("jump operator " + std::to_string(k) +
                                  " has a negative or non-finite rate");
        }
    }
}

Matrix LindbladGenerator::apply(const Matrix& rho) const {
    if (rho.rows() != hamiltonian_.rows() || rho.cols() != hamiltonian_.cols()) {
        throw ValidationError("state dimension does not match the generator");
    }
    const Complex minus_i(0.0, -1.0);
    Matrix out = minus_i * (hamiltonian_ * rho - rho * hamiltonian_);
    for (const auto& j : jumps_) {
        if (j.rate == 0.0) continue;
        const Matrix jdj = j.op.adjoint() * j.op;
        out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (jdj * rho + rho * jdj));
    }
    return out;
}

Matrix LindbladGenerator::superoperator() const {
    const Eigen::Index d = hamiltonian_.rows();
    const Matrix id = Matrix::Identity(d, d);
    const Complex minus_i(0.0, -1.0);
    Matrix l = minus_i * (kron(id, hamiltonian_) - kron(hamiltonian_.transpose(), id));
    for (const auto& j : jumps_) {
        if (j.rate == 0.0) continue;
        const Matrix jdj = j.op.adjoint() * j.op;
        l += j.rate * (kron(j.op.conjugate(), j.op) - 0.5 * kron(id, jdj) -
                       0.5 * kron(jdj.transpose(), id));
    }
    return l;
}

double LindbladGenerator::fastest_rate() const {
    double fastest = 0.0;
    for (const auto& j : jumps_) fastest = std::max(fastest, j.rate);
    if (hamiltonian_.cwiseAbs().maxCoeff() > 0.0) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian_, Eigen::EigenvaluesOnly);
        const auto& ev = solver.eigenvalues();
        fastest = std::max(fastest, ev.maxCoeff() - ev.minCoeff());
    }
    return fastest;
}

}  // namespace qdhom::quantum
