#pragma once

#include <Eigen/Dense>

namespace qdhom::oracle {

// Two-photon amplitude of one cascade on a uniform lattice,
//   psi(t_b, t_x) = 2 sqrt(g_b g_x) exp(-g_b t_b) exp(-g_x (t_x - t_b)),  0 <= t_b <= t_x,
// with row index t_b and column index t_x. The diagonal t_b = t_x takes the
// limiting value (Theta(0) = 1). The amplitude is real.
struct WavefunctionGrid {
    double gamma_b = 0.0;
    double gamma_x = 0.0;
    double step = 0.0;  // ps
    Eigen::MatrixXd values;

    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }

    // Trapezoid rule on the triangular support (half weight on the diagonal).
    double norm() const;
};

// n points per axis spanning [0, window]. Requires rates > 0, n >= 64 and
// window >= 5 max(T1); warns below 10 max(T1).
WavefunctionGrid wavefunction_grid(double gamma_b, double gamma_x, double window_ps,
                                   std::size_t n);

struct PurityResult {
    double purity_x = 0.0;
    double purity_b = 0.0;
    double closed_form = 0.0;
};

// Tr(rho^2) of each marginal via the Gram matrix of the trapezoid-weighted
// amplitude, normalized by its own trace. Rejects a norm off by more than 1%.
PurityResult reduced_purity(const WavefunctionGrid& wf);

// Indistinguishability ceiling of the exciton photon at zero dephasing: the
// purity of its reduced state.
double overlap_visibility_bound(const WavefunctionGrid& wf);

double closed_form_purity(double gamma_b, double gamma_x);  // g_b / (g_b + g_x)

}  // namespace qdhom::oracle
