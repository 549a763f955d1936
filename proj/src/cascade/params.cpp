#include "qdhom/cascade/params.hpp"

#include "qdhom/error.hpp"
#include "qdhom/log.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace qdhom::cascade {

std::string_view to_string(Line line) { return line == Line::biexciton ? "biexciton" : "exciton"; }

Line parse_line(std::string_view name) {
    if (name == "biexciton" || name == "b") return Line::biexciton;
    if (name == "exciton" || name == "x") return Line::exciton;
    throw ValidationError("unknown emission line '" + std::string(name) +
                          "' (expected biexciton or exciton)");
}

QDParams QDParams::from_lifetimes(double t1_b_ps, double t1_x_ps, double deph_b, double deph_x) {
    if (!(t1_b_ps > 0.0) || !(t1_x_ps > 0.0)) {
        throw ValidationError("lifetimes must be positive");
    }
    QDParams p;
    p.gamma_b = 1.0 / t1_b_ps;
    p.gamma_x = 1.0 / t1_x_ps;
    p.deph_b = deph_b;
    p.deph_x = deph_x;
    return p;
}

double QDParams::max_t1() const { return std::max(t1_b(), t1_x()); }

void QDParams::validate() const {
    auto check_rate = [](double v, const char* name, bool strictly_positive) {
        if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v == 0.0)) {
            std::ostringstream msg;
            msg << name << " must be " << (strictly_positive ? "positive" : "nonnegative")
                << " (got " << v << ")";
            throw ValidationError(msg.str());
        }
    };
    check_rate(gamma_b, "biexciton decay rate", true);
    check_rate(gamma_x, "exciton decay rate", true);
    check_rate(deph_b, "biexciton dephasing rate", false);
    check_rate(deph_x, "exciton dephasing rate", false);
    if (initial_state == InitialState::pulse_driven) {
        if (!std::isfinite(pulse.area) || pulse.area <= 0.0) {
            throw ValidationError("pulse area must be positive");
        }
        if (!std::isfinite(pulse.fwhm_ps) || pulse.fwhm_ps <= 0.0) {
            throw ValidationError("pulse duration must be positive");
        }
    }
}

void SensorParams::validate() const {
    if (!std::isfinite(epsilon) || epsilon <= 0.0) {
        throw ValidationError("sensor coupling epsilon must be positive");
    }
    if (!std::isfinite(gamma_s) || gamma_s <= 0.0) {
        throw ValidationError("sensor linewidth must be positive");
    }
    if (epsilon > gamma_s / 10.0) {
        std::ostringstream msg;
        msg << "sensor coupling " << epsilon << " /ps is not small against its linewidth "
            << gamma_s << " /ps; the weak-coupling limit may not hold";
        log::warn(msg.str());
    }
}

SensorParams default_sensor(const QDParams& p, Line line, double eps_rel, double width_rel) {
    if (!(eps_rel > 0.0) || !(width_rel > 0.0)) {
        throw ValidationError("relative sensor coupling and width must be positive");
    }
    return {eps_rel * p.gamma_b, width_rel * (p.gamma_b + p.gamma_x), line};
}

double coherence_rate(const QDParams& p, Line line) {
    if (line == Line::biexciton) return 0.5 * (p.gamma_b + p.gamma_x) + p.deph_b + p.deph_x;
    return 0.5 * p.gamma_x + p.deph_x;
}

std::optional<DephasingRates> try_dephasing_from_t2(double gamma_b, double gamma_x, double t2_b,
                                                    double t2_x) {
    if (!(t2_b > 0.0) || !(t2_x > 0.0)) throw ValidationError("coherence times must be positive");
    const double deph_x = 1.0 / t2_x - 0.5 * gamma_x;
    const double deph_b = 1.0 / t2_b - 0.5 * (gamma_b + gamma_x) - deph_x;
    if (deph_x < 0.0 || deph_b < 0.0) return std::nullopt;
    return DephasingRates{deph_b, deph_x};
}

DephasingRates dephasing_from_t2(double gamma_b, double gamma_x, double t2_b, double t2_x) {
    if (auto r = try_dephasing_from_t2(gamma_b, gamma_x, t2_b, t2_x)) return *r;
    std::ostringstream msg;
    msg << "coherence times (T2b = " << t2_b << " ps, T2x = " << t2_x
        << " ps) need a negative dephasing rate for lifetimes (" << 1.0 / gamma_b << ", "
        << 1.0 / gamma_x << ") ps";
    throw ValidationError(msg.str());
}

}  // namespace qdhom::cascade
