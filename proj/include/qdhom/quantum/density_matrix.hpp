#pragma once

#include "qdhom/quantum/types.hpp"

namespace qdhom::quantum {

struct StateTolerance {
    double hermiticity = 1e-10;
    double trace = 1e-8;
    double min_eigenvalue = -1e-8;
};

// A physical state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix rho, const StateTolerance& tol = {});

    static DensityMatrix basis_state(std::size_t dim, std::size_t index);

    const Matrix& matrix() const { return rho_; }
    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }

    double population(std::size_t index) const { return rho_(index, index).real(); }

private:
    Matrix rho_;
};

double hermiticity_error(const Matrix& m);  // max |m - m^dagger| elementwise
double trace_deviation(const Matrix& m);    // |Tr m - 1|
double min_eigenvalue(const Matrix& m);     // of the Hermitian part

Complex expectation(const Matrix& rho, const Matrix& op);
Complex expectation(const DensityMatrix& rho, const Matrix& op);

}  // namespace qdhom::quantum
