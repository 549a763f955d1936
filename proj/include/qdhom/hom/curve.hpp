#pragma once

#include "qdhom/hom/irf.hpp"
#include "qdhom/quantum/time_grid.hpp"

#include <vector>

namespace qdhom::hom {

using quantum::TimeGrid;

// Real function sampled on a uniform grid, read as its piecewise-linear interpolant.
struct Curve {
    TimeGrid grid{0.0, 1.0, 2};
    std::vector<double> values;

    // step * sum(values). Equals the trapezoid rule when the ends vanish and is
    // exactly conserved by discrete convolution.
    double area() const;
    double max() const;
    // Full width at half maximum by linear interpolation; 0 if undefined.
    double fwhm() const;
    // Exact integral of the interpolant over [a, b] (zero outside the grid).
    double integrate(double a, double b) const;
};

// Full discrete convolution with the IRF kernel; the grid grows by the kernel
// length minus one so that no mass is lost. A kernel longer than the curve is
// an error.
Curve convolve_irf(const Curve& curve, const Irf& irf);

}  // namespace qdhom::hom
