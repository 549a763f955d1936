#pragma once

#include "qdhom/quantum/density_matrix.hpp"
#include "qdhom/quantum/lindblad.hpp"
#include "qdhom/quantum/propagator.hpp"
#include "qdhom/quantum/time_grid.hpp"

#include <vector>

namespace qdhom::quantum {

// Complex two-time function on (t, tau), stored t-major.
struct CorrelationSurface {
    TimeGrid t_grid;
    TimeGrid tau_grid;
    std::vector<Complex> values;

    CorrelationSurface(TimeGrid t, TimeGrid tau)
        : t_grid(t), tau_grid(tau), values(t.count() * tau.count()) {}

    Complex& at(std::size_t i, std::size_t k) { return values[i * tau_grid.count() + k]; }
    const Complex& at(std::size_t i, std::size_t k) const {
        return values[i * tau_grid.count() + k];
    }
    const Complex* row(std::size_t i) const { return values.data() + i * tau_grid.count(); }
};

// <A(t) B(t+tau)> = Tr[ B Lambda_tau( rho(t) A ) ]  (quantum regression).
//
// rho0 is the state at t_grid.start(). The t and tau grids may have different
// steps; tau must start at 0.
CorrelationSurface two_time_correlator(const Matrix& a, const Matrix& b, const DensityMatrix& rho0,
                                       const LindbladGenerator& gen, const TimeGrid& t_grid,
                                       const TimeGrid& tau_grid,
                                       const IntegratorOptions& opts = {});

// Same contraction from precomputed rows:
//   values(i, k) = heis[k] . vec(deformed_i)
// Columns that are identically zero in either block are skipped.
void contract_rows(const SplitRows& deformed, const SplitRows& heis, CorrelationSurface& out);

}  // namespace qdhom::quantum
