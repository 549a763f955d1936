#include "qdhom/hom/pipeline.hpp"

#include "qdhom/error.hpp"
#include "qdhom/simd/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qdhom::hom {
namespace {

void check_intensity_cover(const IntensityTrace& n, const TimeGrid& t_grid,
                           const TimeGrid& tau_grid) {
    if (n.values.size() != n.grid.count()) throw ValidationError("intensity does not match its grid");
    if (!n.grid.same_step(t_grid) || !t_grid.same_step(tau_grid)) {
        throw ValidationError("intensity, t and tau grids must share a step");
    }
    if (std::abs(n.grid.start() - t_grid.start()) > 1e-9 * t_grid.step()) {
        throw ValidationError("intensity grid must start with the t grid");
    }
    if (std::abs(tau_grid.start()) > 1e-12) throw ValidationError("tau grid must start at 0");
    if (n.grid.count() < t_grid.count() + tau_grid.count() - 1) {
        throw ValidationError("intensity does not cover t_end + tau_max");
    }
}

Curve mirrored(const std::vector<double>& half, const TimeGrid& tau_grid) {
    const std::size_t m = half.size();
    Curve c{TimeGrid(-tau_grid.end(), tau_grid.step(), 2 * m - 1), {}};
    c.values.resize(2 * m - 1);
    for (std::size_t k = 0; k < m; ++k) {
        c.values[m - 1 + k] = half[k];
        c.values[m - 1 - k] = half[k];
    }
    return c;
}

}  // namespace

HomSurface g2_hom_surface(const IntensityTrace& n, const CorrelationSurface& g1) {
    check_intensity_cover(n, g1.t_grid, g1.tau_grid);
    const std::size_t nt = g1.t_grid.count();
    const std::size_t ntau = g1.tau_grid.count();
    HomSurface s{g1.t_grid, g1.tau_grid, std::vector<double>(nt * ntau), 0, 0.0};
    const auto& k = simd::active();
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nt; ++i) {
        double row_min = 0.0;
        s.clamped += k.hom_row(n.values[i], n.values.data() + i, g1.row(i), ntau,
                               s.values.data() + i * ntau, &row_min);
        lowest = std::min(lowest, row_min);
    }
    s.min_raw = lowest;
    return s;
}

Curve integrate_over_t(const HomSurface& surface) {
    const std::size_t nt = surface.t_grid.count();
    const std::size_t ntau = surface.tau_grid.count();
    std::vector<double> c(ntau, 0.0);
    const auto& k = simd::active();
    for (std::size_t i = 0; i < nt; ++i) {
        const double w = (i == 0 || i + 1 == nt ? 0.5 : 1.0) * surface.t_grid.step();
        k.axpy(w, surface.values.data() + i * ntau, c.data(), ntau);
    }
    return mirrored(c, surface.tau_grid);
}

Curve distinguishable_curve(const IntensityTrace& n, const TimeGrid& t_grid,
                            const TimeGrid& tau_grid) {
    check_intensity_cover(n, t_grid, tau_grid);
    const std::size_t nt = t_grid.count();
    std::vector<double> w(nt, t_grid.step());
    w.front() *= 0.5;
    w.back() *= 0.5;
    std::vector<double> c(tau_grid.count());
    const auto& k = simd::active();
    for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] = 0.5 * k.weighted_dot(w.data(), n.values.data(), n.values.data() + j, nt);
    }
    return mirrored(c, tau_grid);
}

double aligned_delay(const PatternOptions& opts) {
    if (!(opts.bin_ps > 0.0)) throw ValidationError("pattern bin width must be positive");
    if (!(opts.delay_ps > 0.0)) throw ValidationError("pattern delay must be positive");
    const double bins = std::round(opts.delay_ps / opts.bin_ps);
    if (bins < 1.0) throw ValidationError("pattern delay is shorter than one bin");
    return bins * opts.bin_ps;
}

analysis::Histogram synthesize_pattern(const Curve& central, const Curve& side,
                                       const PatternOptions& opts) {
    const double d = aligned_delay(opts);
    const double bw = opts.bin_ps;
    const double half_cell = 0.5 * d;
    const auto outer = static_cast<long>(std::ceil((d + half_cell) / bw - 1e-9));

    analysis::Histogram h;
    h.bin_width = bw;
    h.origin = -static_cast<double>(outer) * bw;
    h.counts.assign(static_cast<std::size_t>(2 * outer + 1), 0.0);

    struct Peak {
        const Curve* curve;
        double centre;
        const char* name;
    };
    const Peak peaks[] = {{&side, -d, "left"}, {&central, 0.0, "central"}, {&side, d, "right"}};
    for (const auto& pk : peaks) {
        const Curve& c = *pk.curve;
        if (c.values.size() != c.grid.count()) throw ValidationError("curve does not match its grid");
        for (double v : c.values) {
            if (v < 0.0 || !std::isfinite(v)) {
                throw ValidationError("pattern curves must be nonnegative");
            }
        }
        // Local coordinate: u = t - centre.
        const double total = c.integrate(c.grid.start(), c.grid.end());
        const double kept = c.integrate(-half_cell, half_cell);
        if (total > 0.0 && (total - kept) / total > opts.max_truncation) {
            std::ostringstream msg;
            msg << "overlapping peaks: " << 100.0 * (total - kept) / total << "% of the "
                << pk.name << " peak lies beyond " << half_cell
                << " ps from its centre; increase the delay";
            throw ValidationError(msg.str());
        }
        for (std::size_t j = 0; j < h.counts.size(); ++j) {
            const double u = h.center(j) - pk.centre;
            const double lo = std::max(u - 0.5 * bw, -half_cell);
            const double hi = std::min(u + 0.5 * bw, half_cell);
            if (hi > lo) h.counts[j] += c.integrate(lo, hi);
        }
    }
    return h;
}

TimeGrid simulation_grid(const cascade::QDParams& p, const SimulationOptions& opts) {
    const double window = opts.window_ps > 0.0 ? opts.window_ps : 10.0 * p.max_t1();
    if (opts.points < 2) throw ValidationError("grid needs at least 2 points");
    return TimeGrid::spanning(0.0, window, opts.points);
}

HomResult simulate_hom(const cascade::QDParams& p, cascade::Line line,
                       const SimulationOptions& opts) {
    p.validate();
    opts.irf.validate();
    const TimeGrid grid = simulation_grid(p, opts);
    const cascade::LineObservables obs = cascade::simulate_line(p, line, grid, grid, opts.line);

    const HomSurface surface = g2_hom_surface(obs.intensity, obs.g1);
    HomResult r;
    r.line = line;
    r.t_grid = grid;
    r.clamped = surface.clamped;
    r.min_raw = surface.min_raw;
    r.g2_tau = convolve_irf(integrate_over_t(surface), opts.irf);
    r.side = convolve_irf(distinguishable_curve(obs.intensity, grid, grid), opts.irf);
    r.pattern = synthesize_pattern(r.g2_tau, r.side, opts.pattern);

    const double d = aligned_delay(opts.pattern);
    r.areas = analysis::peak_areas(r.pattern, {analysis::PeakWindow{-d, opts.half_width_bins},
                                               analysis::PeakWindow{0.0, opts.half_width_bins},
                                               analysis::PeakWindow{d, opts.half_width_bins}});
    r.p_inf = opts.p_inf;
    r.p0 = analysis::p0(r.areas).value;
    r.visibility = visibility_from_p0(r.p0, r.p_inf);
    return r;
}

}  // namespace qdhom::hom
