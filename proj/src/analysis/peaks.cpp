#include "qdhom/analysis/peaks.hpp"

#include "qdhom/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdhom::analysis {
namespace {

struct BinRange {
    std::size_t first;
    std::size_t last;  // inclusive
};

BinRange window_range(const Histogram& h, const PeakWindow& w) {
    if (w.half_width_bins < 0) throw ValidationError("peak window half-width must be >= 0");
    const double idx = std::round((w.center - h.origin) / h.bin_width);
    const double lo = idx - w.half_width_bins;
    const double hi = idx + w.half_width_bins;
    if (lo < 0.0 || hi >= static_cast<double>(h.size())) {
        std::ostringstream msg;
        msg << "peak window at " << w.center << " ps (+-" << w.half_width_bins
            << " bins) extends outside the histogram";
        throw ValidationError(msg.str());
    }
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

double sum_range(const Histogram& h, BinRange r) {
    double s = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) s += h.counts[i];
    return s;
}

double snap(const Histogram& h, double t) {
    return h.origin + h.bin_width * std::round((t - h.origin) / h.bin_width);
}

double locate_side(const Histogram& h, double expected, double half_width) {
    const double lo_t = std::max(expected - half_width, h.origin);
    const double hi_t = std::min(expected + half_width, h.center(h.size() - 1));
    if (!(hi_t > lo_t)) throw ValidationError("side-peak search region lies outside the histogram");
    const auto lo = static_cast<std::size_t>(std::ceil((lo_t - h.origin) / h.bin_width - 1e-9));
    const auto hi = static_cast<std::size_t>(std::floor((hi_t - h.origin) / h.bin_width + 1e-9));
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (h.counts[i] > h.counts[best]) best = i;
    }
    const double peak = h.counts[best];
    if (!(peak > 0.0)) throw ValidationError("no counts in a side-peak search region");
    // Centroid over the contiguous half-maximum region around the maximum.
    std::size_t a = best;
    std::size_t b = best;
    while (a > lo && h.counts[a - 1] >= 0.5 * peak) --a;
    while (b < hi && h.counts[b + 1] >= 0.5 * peak) ++b;
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = a; i <= b; ++i) {
        m0 += h.counts[i];
        m1 += h.counts[i] * h.center(i);
    }
    return snap(h, m1 / m0);
}

}  // namespace

PeakAreas peak_areas(const Histogram& h, const std::array<PeakWindow, 3>& windows) {
    h.validate();
    std::array<BinRange, 3> r{};
    for (std::size_t k = 0; k < 3; ++k) r[k] = window_range(h, windows[k]);
    if (!(r[0].last < r[1].first && r[1].last < r[2].first)) {
        throw ValidationError("peak windows overlap or are not ordered left, central, right");
    }
    return {sum_range(h, r[0]), sum_range(h, r[1]), sum_range(h, r[2])};
}

Estimate p0(const PeakAreas& a) {
    if (a.left < 0.0 || a.central < 0.0 || a.right < 0.0) {
        throw ValidationError("peak areas must be nonnegative");
    }
    const double side = a.left + a.right;
    if (!(side > 0.0)) throw ValidationError("side peaks are empty; P0 is undefined");
    const double v = a.central / side;
    // Var(Ac) = Ac, Var(S) = S.
    const double var = a.central / (side * side) + a.central * a.central / (side * side * side);
    return {v, std::sqrt(var)};
}

double visibility_from_p0(double p0, double p_inf) {
    if (!std::isfinite(p0) || p0 < 0.0) throw ValidationError("P0 must be nonnegative");
    if (!std::isfinite(p_inf) || p_inf <= 0.0) throw ValidationError("P_inf must be positive");
    return (p_inf - p0) / (p_inf + p0);
}

double visibility_sigma(double p0, double p0_sigma, double p_inf) {
    const double d = p_inf + p0;
    return 2.0 * p_inf / (d * d) * p0_sigma;
}

HomPeakCenters locate_hom_peaks(const Histogram& h, double delay_ps, double search_half_width_ps) {
    h.validate();
    if (h.size() == 0) throw ValidationError("histogram is empty");
    if (!(delay_ps > 0.0) || !(search_half_width_ps > 0.0)) {
        throw ValidationError("peak delay and search width must be positive");
    }
    HomPeakCenters c;
    c.left = locate_side(h, -delay_ps, search_half_width_ps);
    c.right = locate_side(h, delay_ps, search_half_width_ps);
    c.central = snap(h, 0.5 * (c.left + c.right));
    return c;
}

std::array<PeakWindow, 3> hom_windows(const HomPeakCenters& c, int half_width_bins) {
    return {PeakWindow{c.left, half_width_bins}, PeakWindow{c.central, half_width_bins},
            PeakWindow{c.right, half_width_bins}};
}

double side_peak_maximum(const Histogram& h, const HomPeakCenters& c, int half_width_bins) {
    auto max_in = [&](double centre) {
        const BinRange r = window_range(h, {centre, half_width_bins});
        return *std::max_element(h.counts.begin() + static_cast<std::ptrdiff_t>(r.first),
                                 h.counts.begin() + static_cast<std::ptrdiff_t>(r.last) + 1);
    };
    return 0.5 * (max_in(c.left) + max_in(c.right));
}

G2Zero g2_zero(const Histogram& h, double rep_period_ps, int half_width_bins) {
    h.validate();
    if (!(rep_period_ps > 0.0)) throw ValidationError("repetition period must be positive");
    const double span = h.bin_width * static_cast<double>(h.size());
    if (span < 5.0 * rep_period_ps) {
        std::ostringstream msg;
        msg << "autocorrelation histogram spans " << span << " ps, less than 5 repetition periods ("
            << 5.0 * rep_period_ps << " ps)";
        throw ValidationError(msg.str());
    }
    const double central = sum_range(h, window_range(h, {0.0, half_width_bins}));
    double side_sum = 0.0;
    std::size_t sides = 0;
    const double last = h.center(h.size() - 1);
    const auto kmax = static_cast<long>(std::ceil(std::max(std::abs(h.origin), std::abs(last)) /
                                                  rep_period_ps));
    for (long k = -kmax; k <= kmax; ++k) {
        if (k == 0) continue;
        const PeakWindow w{static_cast<double>(k) * rep_period_ps, half_width_bins};
        const double idx = std::round((w.center - h.origin) / h.bin_width);
        if (idx - half_width_bins < 0.0 || idx + half_width_bins >= static_cast<double>(h.size())) {
            continue;
        }
        side_sum += sum_range(h, window_range(h, w));
        ++sides;
    }
    if (sides < 2 || !(side_sum > 0.0)) {
        throw ValidationError("autocorrelation histogram has too few populated side peaks");
    }
    const double mean_side = side_sum / static_cast<double>(sides);
    G2Zero out;
    out.value = central / mean_side;
    out.side_peaks = sides;
    // Poisson on the central area and on the summed side area; one count as
    // the scale when the central peak is empty.
    out.sigma = central > 0.0 ? out.value * std::sqrt(1.0 / central + 1.0 / side_sum)
                              : 1.0 / mean_side;
    return out;
}

}  // namespace qdhom::analysis
