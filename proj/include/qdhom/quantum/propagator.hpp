#pragma once

#include "qdhom/quantum/density_matrix.hpp"
#include "qdhom/quantum/lindblad.hpp"
#include "qdhom/quantum/time_grid.hpp"

#include <functional>
#include <vector>

namespace qdhom::quantum {

struct IntegratorOptions {
    // RK4 step in ps; 0 selects 1 / (200 * fastest_rate), i.e. min(T1)/200.
    double step = 0.0;
    // Step-doubling estimate of the per-step local error allowed before the
    // integrator refuses to run.
    double max_local_error = 1e-9;
};

// Fixed-step classical RK4 for the autonomous master equation, assembled as
// the transfer matrix of one output-grid step. For a linear time-invariant
// generator one RK4 step is the polynomial I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24,
// and m substeps are its m-th power.
class Propagator {
public:
    Propagator(const LindbladGenerator& gen, double grid_step, const IntegratorOptions& opts = {});

    std::size_t dim() const { return dim_; }
    double grid_step() const { return grid_step_; }
    double substep() const { return substep_; }
    std::size_t substeps() const { return substeps_; }
    double local_error_estimate() const { return local_error_; }

    // Schroedinger picture, one grid step: out = P vec(rho).
    void step(const double* re, const double* im, double* out_re, double* out_im) const;
    // Heisenberg picture, one grid step: out = P^T v.
    void step_adjoint(const double* re, const double* im, double* out_re, double* out_im) const;

    Matrix step(const Matrix& m) const;
    const Matrix& transfer() const { return transfer_; }

private:
    std::size_t dim_;
    double grid_step_;
    double substep_ = 0.0;
    std::size_t substeps_ = 1;
    double local_error_ = 0.0;
    Matrix transfer_;
    std::vector<double> fwd_re_, fwd_im_;
    std::vector<double> adj_re_, adj_im_;
};

// rows[i] = vec(P^i m0), i < count.
SplitRows propagate_rows(const Propagator& p, const Matrix& m0, std::size_t count);

// rows[k] = (P^T)^k vec(B^T), so that Tr[B Y(k)] = rows[k] . vec(Y(0)).
SplitRows heisenberg_rows(const Propagator& p, const Matrix& observable, std::size_t count);

std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const LindbladGenerator& gen,
                                  const TimeGrid& grid, const IntegratorOptions& opts = {});

// Plain step-by-step RK4 with a time-dependent Hamiltonian. Used for pulse
// preparation.
Matrix evolve_driven(const Matrix& rho0, const std::function<Matrix(double)>& hamiltonian,
                     const std::vector<JumpOperator>& jumps, double t0, double t1, double step);

}  // namespace qdhom::quantum
