#include "qdhom/oracle/cascade_wavefunction.hpp"

#include "qdhom/error.hpp"
#include "qdhom/log.hpp"

#include <cmath>
#include <sstream>

namespace qdhom::oracle {
namespace {

Eigen::VectorXd trapezoid_weights(std::size_t n, double step) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), step);
    w(0) *= 0.5;
    w(static_cast<Eigen::Index>(n) - 1) *= 0.5;
    return w;
}

// Weighted amplitude M = diag(sqrt w) psi diag(sqrt w).
Eigen::MatrixXd weighted(const WavefunctionGrid& wf) {
    const Eigen::VectorXd s = trapezoid_weights(wf.size(), wf.step).cwiseSqrt();
    return s.asDiagonal() * wf.values * s.asDiagonal();
}

// Purity of a A^T, filled as a symmetric rank update (lower triangle only).
double gram_purity(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a);
    const double tr = gram.trace();
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) off += gram.col(j).tail(n - j - 1).squaredNorm();
    return (gram.diagonal().squaredNorm() + 2.0 * off) / (tr * tr);
}

void check_normalized(const WavefunctionGrid& wf) {
    const double n = wf.norm();
    if (std::abs(n - 1.0) > 0.01) {
        std::ostringstream msg;
        msg << "wavefunction norm " << n
            << " is more than 1% from 1; refine the lattice or widen the window";
        throw ValidationError(msg.str());
    }
}

}  // namespace

double WavefunctionGrid::norm() const {
    const auto n = values.rows();
    const Eigen::VectorXd w = trapezoid_weights(static_cast<std::size_t>(n), step);
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double v = values(i, j);
            s += (i == j ? 0.5 : 1.0) * w(i) * w(j) * v * v;
        }
    }
    return s;
}

WavefunctionGrid wavefunction_grid(double gamma_b, double gamma_x, double window_ps,
                                   std::size_t n) {
    if (!(gamma_b > 0.0) || !(gamma_x > 0.0) || !std::isfinite(gamma_b) ||
        !std::isfinite(gamma_x)) {
        throw ValidationError("decay rates must be positive");
    }
    if (n < 64) throw ValidationError("wavefunction lattice needs at least 64 points per axis");
    const double max_t1 = std::max(1.0 / gamma_b, 1.0 / gamma_x);
    if (!(window_ps >= 5.0 * max_t1)) {
        std::ostringstream msg;
        msg << "window " << window_ps << " ps is shorter than 5 max(T1) = " << 5.0 * max_t1 << " ps";
        throw ValidationError(msg.str());
    }
    if (window_ps < 10.0 * max_t1) {
        log::warn("wavefunction window is shorter than 10 max(T1); the norm may fall short");
    }
    WavefunctionGrid wf;
    wf.gamma_b = gamma_b;
    wf.gamma_x = gamma_x;
    wf.step = window_ps / static_cast<double>(n - 1);
    const auto dim = static_cast<Eigen::Index>(n);
    wf.values = Eigen::MatrixXd::Zero(dim, dim);
    const double amp = 2.0 * std::sqrt(gamma_b * gamma_x);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double tb = wf.step * static_cast<double>(i);
        const double head = amp * std::exp(-gamma_b * tb);
        for (Eigen::Index j = i; j < dim; ++j) {
            const double tx = wf.step * static_cast<double>(j);
            wf.values(i, j) = head * std::exp(-gamma_x * (tx - tb));
        }
    }
    return wf;
}

PurityResult reduced_purity(const WavefunctionGrid& wf) {
    check_normalized(wf);
    const Eigen::MatrixXd m = weighted(wf);
    PurityResult r;
    // rho_x(t, t') = sum over t_b; rho_b(t, t') = sum over t_x.
    r.purity_x = gram_purity(m.transpose());
    r.purity_b = gram_purity(m);
    r.closed_form = closed_form_purity(wf.gamma_b, wf.gamma_x);
    return r;
}

double overlap_visibility_bound(const WavefunctionGrid& wf) { return reduced_purity(wf).purity_x; }

double closed_form_purity(double gamma_b, double gamma_x) {
    if (!(gamma_b > 0.0) || !(gamma_x > 0.0)) throw ValidationError("decay rates must be positive");
    return gamma_b / (gamma_b + gamma_x);
}

}  // namespace qdhom::oracle
