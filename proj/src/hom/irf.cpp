#include "qdhom/hom/irf.hpp"

#include "qdhom/error.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace qdhom::hom {

std::string_view to_string(IrfShape s) { return s == IrfShape::gaussian ? "gaussian" : "delta"; }

IrfShape parse_irf_shape(std::string_view name) {
    if (name == "gaussian") return IrfShape::gaussian;
    if (name == "delta") return IrfShape::delta;
    throw ValidationError("unknown IRF shape '" + std::string(name) +
                          "' (expected gaussian or delta)");
}

double Irf::sigma_ps() const {
    if (shape == IrfShape::delta) return 0.0;
    return fwhm_ps / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

void Irf::validate() const {
    if (shape == IrfShape::gaussian && (!std::isfinite(fwhm_ps) || fwhm_ps <= 0.0)) {
        throw ValidationError("Gaussian IRF fwhm must be positive");
    }
}

std::vector<double> Irf::kernel(double step) const {
    validate();
    if (!(step > 0.0)) throw ValidationError("kernel grid step must be positive");
    if (shape == IrfShape::delta) return {1.0};
    const double sigma = sigma_ps();
    const auto half = static_cast<std::size_t>(std::ceil(5.0 * sigma / step));
    std::vector<double> k(2 * half + 1);
    const double scale = 1.0 / (sigma * std::numbers::sqrt2);
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double centre = (static_cast<double>(j) - static_cast<double>(half)) * step;
        k[j] = 0.5 * (std::erf((centre + 0.5 * step) * scale) -
                      std::erf((centre - 0.5 * step) * scale));
    }
    const double total = std::accumulate(k.begin(), k.end(), 0.0);
    for (auto& v : k) v /= total;
    return k;
}

}  // namespace qdhom::hom
