#include "qdhom/fit/dephasing.hpp"

#include "qdhom/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qdhom::fit {

DephasingTime dephasing_time(double t2, double t1) {
    if (!(t2 > 0.0) || !(t1 > 0.0) || !std::isfinite(t2) || !std::isfinite(t1)) {
        throw ValidationError("T2 and T1 must be positive");
    }
    const double limit = 2.0 * t1;
    if (std::abs(t2 - limit) <= 1e-12 * limit) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    if (t2 > limit) {
        std::ostringstream msg;
        msg << "T2 = " << t2 << " ps exceeds the radiative limit 2 T1 = " << limit
            << " ps; no nonnegative pure-dephasing time exists";
        throw ValidationError(msg.str());
    }
    return {1.0 / (1.0 / t2 - 1.0 / limit), false};
}

void Range::validate(const char* name) const {
    std::ostringstream msg;
    msg << name << " range (" << min << ", " << max << ", " << step << "): ";
    if (!(std::isfinite(min) && std::isfinite(max) && std::isfinite(step))) {
        msg << "values must be finite";
        throw ValidationError(msg.str());
    }
    if (!(min > 0.0)) {
        msg << "minimum must be positive";
        throw ValidationError(msg.str());
    }
    if (!(min < max)) {
        msg << "minimum must be below maximum";
        throw ValidationError(msg.str());
    }
    if (!(step > 0.0)) {
        msg << "step must be positive";
        throw ValidationError(msg.str());
    }
    const double n = (max - min) / step;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
        msg << "step does not divide the range";
        throw ValidationError(msg.str());
    }
}

std::vector<double> Range::values() const {
    const auto n = static_cast<std::size_t>(std::llround((max - min) / step));
    std::vector<double> v(n + 1);
    // Computed from the index so nodes are exact multiples, not accumulated sums.
    for (std::size_t i = 0; i <= n; ++i) v[i] = min + step * static_cast<double>(i);
    return v;
}

void FitGrid::validate() const {
    t2b.validate("T2b");
    t2x.validate("T2x");
}

}  // namespace qdhom::fit
