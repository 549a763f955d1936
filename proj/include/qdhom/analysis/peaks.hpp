#pragma once

#include "qdhom/analysis/histogram.hpp"

#include <array>

namespace qdhom::analysis {

struct PeakWindow {
    double center = 0.0;      // ps; snapped to the nearest bin
    int half_width_bins = 70;  // 2*70 + 1 = 141 bins
};

struct PeakAreas {
    double left = 0.0;
    double central = 0.0;
    double right = 0.0;
};

// Sum of counts in each window. Windows must be ordered left < central < right,
// lie inside the histogram and not overlap.
PeakAreas peak_areas(const Histogram& h, const std::array<PeakWindow, 3>& windows);

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
};

// P0 = A_c / (A_l + A_r) with Poisson errors on the raw areas.
Estimate p0(const PeakAreas& areas);

// (p_inf - p0) / (p_inf + p0).
double visibility_from_p0(double p0, double p_inf = 0.5);
double visibility_sigma(double p0, double p0_sigma, double p_inf = 0.5);

struct HomPeakCenters {
    double left = 0.0;
    double central = 0.0;
    double right = 0.0;
};

// Side peaks: maximum within +-search_half_width of -delay and +delay, refined
// by a local centroid and snapped to a bin. The central centre is the midpoint
// of the two, since a dip at zero delay defeats a maximum search there.
HomPeakCenters locate_hom_peaks(const Histogram& h, double delay_ps, double search_half_width_ps);

std::array<PeakWindow, 3> hom_windows(const HomPeakCenters& c, int half_width_bins = 70);

// Mean of the two side-peak maxima, for display normalization.
double side_peak_maximum(const Histogram& h, const HomPeakCenters& c, int half_width_bins = 70);

struct G2Zero {
    double value = 0.0;
    double sigma = 0.0;
    std::size_t side_peaks = 0;
};

// Central-peak area at zero delay divided by the mean area of the side peaks at
// nonzero multiples of the repetition period.
G2Zero g2_zero(const Histogram& h, double rep_period_ps = 12500.0, int half_width_bins = 70);

}  // namespace qdhom::analysis
