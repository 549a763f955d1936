#include "qdhom/hom/curve.hpp"

#include "qdhom/error.hpp"
#include "qdhom/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdhom::hom {

double Curve::area() const {
    return grid.step() * std::accumulate(values.begin(), values.end(), 0.0);
}

double Curve::max() const {
    if (values.empty()) return 0.0;
    return *std::max_element(values.begin(), values.end());
}

double Curve::fwhm() const {
    if (values.size() < 3) return 0.0;
    const auto peak_it = std::max_element(values.begin(), values.end());
    const double half = 0.5 * *peak_it;
    if (!(half > 0.0)) return 0.0;
    const auto peak = static_cast<std::size_t>(peak_it - values.begin());
    std::size_t l = peak;
    while (l > 0 && values[l - 1] > half) --l;
    std::size_t r = peak;
    while (r + 1 < values.size() && values[r + 1] > half) ++r;
    if (l == 0 || r + 1 == values.size()) return 0.0;
    // Crossing points between (l-1, l) and (r, r+1).
    const double xl = grid.at(l - 1) + grid.step() * (half - values[l - 1]) /
                                           (values[l] - values[l - 1]);
    const double xr =
        grid.at(r) + grid.step() * (values[r] - half) / (values[r] - values[r + 1]);
    return xr - xl;
}

double Curve::integrate(double a, double b) const {
    if (b < a) return -integrate(b, a);
    const double h = grid.step();
    const double lo = std::max(a, grid.start());
    const double hi = std::min(b, grid.end());
    if (!(hi > lo)) return 0.0;
    auto value_at = [&](std::size_t i, double t) {
        const double frac = (t - grid.at(i)) / h;
        return values[i] + frac * (values[i + 1] - values[i]);
    };
    const std::size_t last_cell = values.size() - 2;
    auto cell_of = [&](double t) {
        const double c = std::floor((t - grid.start()) / h);
        return std::min(static_cast<std::size_t>(std::max(c, 0.0)), last_cell);
    };
    const std::size_t ca = cell_of(lo);
    const std::size_t cb = cell_of(hi);
    if (ca == cb) return 0.5 * (value_at(ca, lo) + value_at(ca, hi)) * (hi - lo);
    double s = 0.5 * (value_at(ca, lo) + values[ca + 1]) * (grid.at(ca + 1) - lo);
    for (std::size_t c = ca + 1; c < cb; ++c) s += 0.5 * (values[c] + values[c + 1]) * h;
    s += 0.5 * (values[cb] + value_at(cb, hi)) * (hi - grid.at(cb));
    return s;
}

Curve convolve_irf(const Curve& curve, const Irf& irf) {
    if (curve.values.size() != curve.grid.count()) {
        throw ValidationError("curve does not match its grid");
    }
    const std::vector<double> k = irf.kernel(curve.grid.step());
    if (k.size() == 1) return curve;
    if (k.size() > curve.values.size()) {
        throw ValidationError("IRF kernel (" + std::to_string(k.size()) +
                              " taps) is wider than the curve (" +
                              std::to_string(curve.values.size()) + " points)");
    }
    const std::size_t half = k.size() / 2;
    const double start = curve.grid.start() - static_cast<double>(half) * curve.grid.step();
    Curve out{TimeGrid(start, curve.grid.step(), curve.values.size() + k.size() - 1), {}};
    out.values.resize(out.grid.count());
    simd::active().convolve_full(curve.values.data(), curve.values.size(), k.data(), k.size(),
                                 out.values.data());
    return out;
}

}  // namespace qdhom::hom
