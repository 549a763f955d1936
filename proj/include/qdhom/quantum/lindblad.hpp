#pragma once

#include "qdhom/quantum/types.hpp"

#include <vector>

namespace qdhom::quantum {

struct JumpOperator {
    Matrix op;
    double rate;  // 1/ps
};

// GKSL generator  L[rho] = -i[H, rho] + sum_k rate_k (J rho J^dag - {J^dag J, rho}/2).
// Hamiltonian in rad/ps.
class LindbladGenerator {
public:
    LindbladGenerator(Matrix hamiltonian, std::vector<JumpOperator> jumps);

    std::size_t dim() const { return static_cast<std::size_t>(hamiltonian_.rows()); }
    const Matrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<JumpOperator>& jumps() const { return jumps_; }

    Matrix apply(const Matrix& rho) const;

    // dim^2 x dim^2 matrix acting on column-stacked vec(rho).
    Matrix superoperator() const;

    // Largest relaxation rate or Hamiltonian energy scale, 1/ps.
    double fastest_rate() const;

private:
    Matrix hamiltonian_;
    std::vector<JumpOperator> jumps_;
};

}  // namespace qdhom::quantum
