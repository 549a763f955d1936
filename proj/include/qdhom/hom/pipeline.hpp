#pragma once

#include "qdhom/analysis/histogram.hpp"
#include "qdhom/analysis/peaks.hpp"
#include "qdhom/cascade/coherence.hpp"
#include "qdhom/hom/curve.hpp"
#include "qdhom/hom/irf.hpp"

namespace qdhom::hom {

using analysis::visibility_from_p0;
using cascade::IntensityTrace;
using quantum::CorrelationSurface;

// 0.5 * (n(t) n(t + tau) - |G1(t, tau)|^2) for two identical independent sources.
struct HomSurface {
    TimeGrid t_grid;
    TimeGrid tau_grid;
    std::vector<double> values;  // t-major, clamped at 0
    std::size_t clamped = 0;     // entries that were negative before clamping
    double min_raw = 0.0;        // most negative raw value (or the minimum if none)
};

// n must start with the t grid, share its step and cover t_end + tau_max.
HomSurface g2_hom_surface(const IntensityTrace& n, const CorrelationSurface& g1);

// Trapezoid over t, mirrored to negative tau: the result spans [-tau_max, tau_max].
Curve integrate_over_t(const HomSurface& surface);

// 0.5 * integral of n(t) n(t + tau) over the t grid, mirrored like integrate_over_t.
Curve distinguishable_curve(const IntensityTrace& n, const TimeGrid& t_grid,
                            const TimeGrid& tau_grid);

struct PatternOptions {
    double delay_ps = 3000.0;
    double bin_ps = 16.0;
    // Largest fraction of a peak allowed to fall outside its own cell.
    double max_truncation = 0.01;
};

// Delay rounded to a whole number of bins, so side peaks sit on bin centres.
double aligned_delay(const PatternOptions& opts);

// Three-peak coincidence histogram: `side` at +-delay and `central` at 0. Bins are
// centred on multiples of the bin width and hold the exact integral of the
// piecewise-linear curves over the bin; each peak is confined to the cell within
// delay/2 of its centre.
analysis::Histogram synthesize_pattern(const Curve& central, const Curve& side,
                                       const PatternOptions& opts);

struct SimulationOptions {
    cascade::LineSettings line{};
    double window_ps = 0.0;  // 0: 10 * max(T1)
    std::size_t points = 2000;
    Irf irf{};
    PatternOptions pattern{};
    int half_width_bins = 70;
    double p_inf = 0.5;
};

struct HomResult {
    cascade::Line line = cascade::Line::exciton;
    Curve g2_tau;  // central peak after the IRF
    Curve side;    // distinguishable reference after the IRF
    analysis::Histogram pattern;
    analysis::PeakAreas areas;
    double p0 = 0.0;
    double p_inf = 0.5;
    double visibility = 0.0;
    std::size_t clamped = 0;
    double min_raw = 0.0;
    TimeGrid t_grid{0.0, 1.0, 2};
};

HomResult simulate_hom(const cascade::QDParams& p, cascade::Line line,
                       const SimulationOptions& opts = {});

// Resolved simulation grid for a parameter set.
TimeGrid simulation_grid(const cascade::QDParams& p, const SimulationOptions& opts);

}  // namespace qdhom::hom
