#pragma once

#include <string_view>
#include <vector>

namespace qdhom::hom {

enum class IrfShape { gaussian, delta };

std::string_view to_string(IrfShape s);
IrfShape parse_irf_shape(std::string_view name);

struct Irf {
    IrfShape shape = IrfShape::gaussian;
    double fwhm_ps = 40.0;

    static Irf delta() { return {IrfShape::delta, 0.0}; }
    static Irf gaussian(double fwhm_ps) { return {IrfShape::gaussian, fwhm_ps}; }

    double sigma_ps() const;  // 0 for delta

    void validate() const;

    // Odd-length discrete kernel on a grid of spacing `step`, centred tap in the
    // middle, weights summing to 1. Each tap is the Gaussian mass of its cell;
    // the kernel extends to +-5 sigma. A delta IRF gives {1}.
    std::vector<double> kernel(double step) const;
};

}  // namespace qdhom::hom
