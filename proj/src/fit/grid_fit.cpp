#include "qdhom/fit/grid_fit.hpp"

#include "qdhom/analysis/peaks.hpp"
#include "qdhom/error.hpp"
#include "qdhom/log.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace qdhom::fit {
namespace {

// Measured-side quantities that do not depend on the node.
struct Prepared {
    cascade::Line line;
    const analysis::Histogram* h;
    analysis::HomPeakCenters centres;
    double side_area;
    double side_max;
    double p0;
    double delay;              // half the measured side separation
    std::size_t region_first;  // bins compared by shape_chi2
    std::size_t region_last;
    long centre_bin;
};

Prepared prepare(const LineData& d, const FitOptions& opts) {
    const auto& h = d.histogram;
    h.validate();
    Prepared p{};
    p.line = d.line;
    p.h = &h;
    p.centres = analysis::locate_hom_peaks(h, opts.sim.pattern.delay_ps, opts.search_half_width_ps);
    const auto windows = analysis::hom_windows(p.centres, opts.sim.half_width_bins);
    const analysis::PeakAreas a = analysis::peak_areas(h, windows);
    p.side_area = a.left + a.right;
    if (!(p.side_area > 0.0)) throw ValidationError("measured side peaks are empty");
    p.side_max = analysis::side_peak_maximum(h, p.centres, opts.sim.half_width_bins);
    p.p0 = analysis::p0(a).value;
    p.delay = 0.5 * (p.centres.right - p.centres.left);
    p.centre_bin = std::lround((p.centres.central - h.origin) / h.bin_width);
    const auto half = static_cast<long>(std::floor(opts.chi2_half_range_ps / h.bin_width + 1e-9));
    if (p.centre_bin - half < 0 || p.centre_bin + half >= static_cast<long>(h.size())) {
        throw ValidationError("measured histogram does not cover the central region +-" +
                              std::to_string(opts.chi2_half_range_ps) + " ps");
    }
    p.region_first = static_cast<std::size_t>(p.centre_bin - half);
    p.region_last = static_cast<std::size_t>(p.centre_bin + half);
    return p;
}

double score_line(const Prepared& m, const Template& t, const FitOptions& opts) {
    const auto& th = t.pattern;
    const double d = m.delay;
    const analysis::HomPeakCenters tc{-d, 0.0, d};
    if (opts.objective == Objective::p0_match) {
        const double diff = m.p0 - t.p0;
        return diff * diff;
    }
    double scale;
    if (opts.normalization == Normalization::area) {
        const analysis::PeakAreas ta =
            analysis::peak_areas(th, analysis::hom_windows(tc, opts.sim.half_width_bins));
        scale = m.side_area / (ta.left + ta.right);
    } else {
        scale = m.side_max / analysis::side_peak_maximum(th, tc, opts.sim.half_width_bins);
    }
    const long t_centre = std::lround(-th.origin / th.bin_width);
    const long offset = t_centre - m.centre_bin;
    const auto first = static_cast<long>(m.region_first) + offset;
    const auto last = static_cast<long>(m.region_last) + offset;
    if (first < 0 || last >= static_cast<long>(th.size())) {
        throw ValidationError("template does not cover the compared central region");
    }
    double peak = 0.0;
    for (long i = first; i <= last; ++i) peak = std::max(peak, th.counts[static_cast<std::size_t>(i)]);
    const double floor = 1e-9 * scale * peak;
    double chi2 = 0.0;
    for (std::size_t i = m.region_first; i <= m.region_last; ++i) {
        const double model = scale * th.counts[static_cast<std::size_t>(static_cast<long>(i) + offset)];
        const double r = m.h->counts[i] - model;
        chi2 += r * r / std::max(model, floor);
    }
    return chi2;
}

bool better(const NodeResult& a, const NodeResult& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    if (a.t2b != b.t2b) return a.t2b > b.t2b;
    return a.t2x > b.t2x;
}

}  // namespace

std::string_view to_string(Objective o) {
    return o == Objective::shape_chi2 ? "shape_chi2" : "p0_match";
}

std::string_view to_string(Normalization n) { return n == Normalization::area ? "area" : "max"; }

Objective parse_objective(std::string_view name) {
    if (name == "shape_chi2") return Objective::shape_chi2;
    if (name == "p0_match") return Objective::p0_match;
    throw ValidationError("unknown fit objective '" + std::string(name) +
                          "' (expected shape_chi2 or p0_match)");
}

Normalization parse_normalization(std::string_view name) {
    if (name == "area") return Normalization::area;
    if (name == "max") return Normalization::max;
    throw ValidationError("unknown normalization '" + std::string(name) +
                          "' (expected area or max)");
}

FitResult grid_fit(const std::vector<LineData>& measured, double t1_b, double t1_x,
                   const FitOptions& opts, TemplateCache& cache) {
    if (!(t1_b > 0.0) || !(t1_x > 0.0)) throw ValidationError("lifetimes must be positive");
    if (measured.empty()) throw ValidationError("no measured patterns to fit");
    opts.grid.validate();
    if (!(opts.chi2_half_range_ps > 0.0)) throw ValidationError("chi2 range must be positive");

    std::vector<Prepared> prepared;
    prepared.reserve(measured.size());
    for (const auto& d : measured) prepared.push_back(prepare(d, opts));

    const auto bs = opts.grid.t2b.values();
    const auto xs = opts.grid.t2x.values();
    const double gamma_b = 1.0 / t1_b;
    const double gamma_x = 1.0 / t1_x;

    FitResult out;
    out.objective = opts.objective;
    out.normalization = opts.normalization;
    out.nodes.resize(bs.size() * xs.size());
    for (std::size_t i = 0; i < bs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            auto& n = out.nodes[i * xs.size() + j];
            n.t2b = bs[i];
            n.t2x = xs[j];
            n.feasible = cascade::try_dephasing_from_t2(gamma_b, gamma_x, bs[i], xs[j]).has_value();
        }
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= out.nodes.size()) return;
            auto& n = out.nodes[idx];
            if (!n.feasible) continue;
            try {
                const auto rates = cascade::dephasing_from_t2(gamma_b, gamma_x, n.t2b, n.t2x);
                double total = 0.0;
                for (const auto& m : prepared) {
                    TemplateSpec spec;
                    spec.params = cascade::QDParams::from_lifetimes(t1_b, t1_x, rates.deph_b,
                                                                    rates.deph_x);
                    spec.params.initial_state = opts.initial_state;
                    spec.params.pulse = opts.pulse;
                    spec.line = m.line;
                    spec.sim = opts.sim;
                    spec.sim.pattern.bin_ps = m.h->bin_width;
                    spec.sim.pattern.delay_ps = m.delay;
                    total += score_line(m, *cache.get(spec), opts);
                }
                n.objective = total;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(out.nodes.size());
                return;
            }
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, out.nodes.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    const NodeResult* best = nullptr;
    for (const auto& n : out.nodes) {
        if (!n.feasible) {
            ++out.infeasible;
            continue;
        }
        ++out.feasible;
        if (!best || better(n, *best)) best = &n;
    }
    if (!best) {
        std::ostringstream msg;
        msg << "every node of the " << out.nodes.size()
            << "-node grid needs a negative dephasing rate for lifetimes (" << t1_b << ", " << t1_x
            << ") ps";
        throw NumericalError(msg.str());
    }
    if (out.infeasible > 0) {
        std::ostringstream msg;
        msg << out.infeasible << " of " << out.nodes.size()
            << " grid nodes need a negative dephasing rate and were skipped";
        log::warn(msg.str());
    }
    out.tied_nodes = 0;
    for (const auto& n : out.nodes) {
        if (n.feasible && n.objective == best->objective) ++out.tied_nodes;
    }
    out.t2b = best->t2b;
    out.t2x = best->t2x;
    out.objective_value = best->objective;
    out.uncertainty_b = opts.grid.t2b.step;
    out.uncertainty_x = opts.grid.t2x.step;
    out.t2_star_b = dephasing_time(out.t2b, t1_b);
    out.t2_star_x = dephasing_time(out.t2x, t1_x);
    return out;
}

}  // namespace qdhom::fit
