#include "qdhom/analysis/lifetime.hpp"

#include "qdhom/error.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qdhom::analysis {
namespace {

struct Samples {
    Eigen::VectorXd t;
    Eigen::VectorXd y;   // normalized to the peak
    Eigen::VectorXd sw;  // sqrt of weights
};

// Parameters: delta {A, T1, B}, Gaussian {A, t0, T1, B}.
struct Model : Eigen::DenseFunctor<double> {
    const Samples* s;
    double t_ref;
    double sigma;  // 0 for the plain exponential

    Model(const Samples& samples, double ref, double sig)
        : DenseFunctor<double>(sig > 0.0 ? 4 : 3, static_cast<int>(samples.t.size())),
          s(&samples), t_ref(ref), sigma(sig) {}

    double eval(const Eigen::VectorXd& x, double t) const {
        if (sigma == 0.0) return x(0) * std::exp(-(t - t_ref) / x(1)) + x(2);
        const double a = x(0), t0 = x(1), tau = x(2), b = x(3);
        const double u = t - t0;
        const double arg = (sigma / tau - u / sigma) / std::numbers::sqrt2;
        // exp(s^2/2tau^2 - u/tau) erfc(arg), rewritten with erfcx-style care for large arg.
        double core;
        if (arg > 5.0) {
            // erfc(z) ~ exp(-z^2)/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4)); exponent combines to -u^2/2s^2.
            const double z2 = arg * arg;
            core = std::exp(-0.5 * u * u / (sigma * sigma)) / (arg * std::sqrt(std::numbers::pi)) *
                   (1.0 - 0.5 / z2 + 0.75 / (z2 * z2));
        } else {
            core = std::exp(0.5 * sigma * sigma / (tau * tau) - u / tau) * std::erfc(arg);
        }
        return 0.5 * a * core + b;
    }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        for (Eigen::Index j = 0; j < s->t.size(); ++j) {
            f(j) = (eval(x, s->t(j)) - s->y(j)) * s->sw(j);
        }
        return 0;
    }
};

bool converged(Eigen::LevenbergMarquardtSpace::Status st) {
    using namespace Eigen::LevenbergMarquardtSpace;
    switch (st) {
    case RelativeReductionTooSmall:
    case RelativeErrorTooSmall:
    case RelativeErrorAndReductionTooSmall:
    case CosinusTooSmall:
    case FtolTooSmall:
    case XtolTooSmall:
    case GtolTooSmall:
        return true;
    default:
        return false;
    }
}

}  // namespace

std::string_view to_string(LifetimeModel m) {
    return m == LifetimeModel::single_exponential ? "single_exponential" : "exp_convolved_irf";
}

LifetimeFit lifetime_fit(const Histogram& h, const hom::Irf& irf) {
    h.validate();
    irf.validate();
    if (h.size() < 8) throw ValidationError("decay histogram has too few bins");
    const auto peak_it = std::max_element(h.counts.begin(), h.counts.end());
    const double ymax = *peak_it;
    if (!(ymax > 0.0)) throw ValidationError("decay histogram is empty");
    const auto peak = static_cast<std::size_t>(peak_it - h.counts.begin());

    // Signal requirement: >= 200 populated bins after the peak or >= 3 decades.
    std::size_t populated = 0;
    double min_pos = ymax;
    for (std::size_t i = peak; i < h.size(); ++i) {
        if (h.counts[i] > 0.0) {
            ++populated;
            min_pos = std::min(min_pos, h.counts[i]);
        }
    }
    if (populated < 200 && ymax / min_pos < 1e3) {
        throw ValidationError("decay histogram needs >= 200 bins or >= 3 decades of signal");
    }

    const bool gaussian = irf.shape == hom::IrfShape::gaussian;
    const double sigma = irf.sigma_ps();
    std::size_t first = peak + 1;
    if (gaussian) {
        const double start_t = h.center(peak) - 5.0 * sigma;
        first = start_t <= h.origin ? 0 : static_cast<std::size_t>(
                                              std::ceil((start_t - h.origin) / h.bin_width));
    }
    const std::size_t n = h.size() - first;
    const std::size_t params = gaussian ? 4 : 3;
    if (n < params + 2) throw ValidationError("too few bins to fit after the peak");

    Samples s;
    s.t.resize(static_cast<Eigen::Index>(n));
    s.y.resize(static_cast<Eigen::Index>(n));
    s.sw.resize(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const auto k = static_cast<Eigen::Index>(j);
        s.t(k) = h.center(first + j);
        s.y(k) = h.counts[first + j] / ymax;
        s.sw(k) = 1.0 / std::sqrt(std::max(s.y(k), 1e-3));
    }

    // Starting point.
    const std::size_t tail = std::max<std::size_t>(3, n / 20);
    double b0 = 0.0;
    for (std::size_t j = n - tail; j < n; ++j) b0 += s.y(static_cast<Eigen::Index>(j));
    b0 /= static_cast<double>(tail);
    const double top = 1.0 - b0;
    double t1_0 = 0.2 * (s.t(s.t.size() - 1) - h.center(peak));
    for (std::size_t i = peak; i < h.size(); ++i) {
        if (h.counts[i] / ymax - b0 < top / std::numbers::e) {
            t1_0 = std::max(h.center(i) - h.center(peak), h.bin_width);
            break;
        }
    }

    const double t_ref = gaussian ? 0.0 : h.center(first);
    Model model(s, t_ref, gaussian ? sigma : 0.0);
    Eigen::VectorXd x(static_cast<Eigen::Index>(params));
    if (gaussian) {
        x << top, h.center(peak) - sigma, t1_0, b0;
    } else {
        x << std::max(s.y(0) - b0, 1e-6), t1_0, b0;
    }

    Eigen::NumericalDiff<Model, Eigen::Central> diff(model);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Model, Eigen::Central>> lm(diff);
    lm.setMaxfev(4000);
    lm.setXtol(1e-12);
    lm.setFtol(1e-14);
    const auto status = lm.minimize(x);
    const int t1_index = gaussian ? 2 : 1;
    if (!converged(status)) {
        std::ostringstream msg;
        msg << "lifetime fit did not converge (status " << static_cast<int>(status) << " after "
            << lm.nfev() << " evaluations, last T1 = " << x(t1_index) << " ps)";
        throw NumericalError(msg.str());
    }
    if (!(x(t1_index) > 0.0)) {
        throw NumericalError("lifetime fit returned a nonpositive T1");
    }

    Eigen::VectorXd f(static_cast<Eigen::Index>(n));
    model(x, f);
    const double chi2_norm = f.squaredNorm();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(params));
    diff.df(x, jac);
    const Eigen::MatrixXd info = jac.transpose() * jac;
    const Eigen::MatrixXd cov = info.ldlt().solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(params),
                                  static_cast<Eigen::Index>(params)));

    LifetimeFit out;
    out.model = gaussian ? LifetimeModel::exp_convolved_irf : LifetimeModel::single_exponential;
    out.t1 = x(t1_index);
    // Normalizing by the peak scales chi2 by 1/ymax relative to raw counts.
    out.uncertainty = std::sqrt(std::max(cov(t1_index, t1_index), 0.0) / ymax);
    out.amplitude = x(0) * ymax;
    out.background = x(static_cast<Eigen::Index>(params) - 1) * ymax;
    out.t0 = gaussian ? x(1) : t_ref;
    out.reduced_chi2 = chi2_norm * ymax / static_cast<double>(n - params);
    out.bins_used = n;
    out.evaluations = static_cast<int>(lm.nfev());
    return out;
}

}  // namespace qdhom::analysis
