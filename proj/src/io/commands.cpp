#include "qdhom/io/commands.hpp"

#include "qdhom/analysis/lifetime.hpp"
#include "qdhom/analysis/peaks.hpp"
#include "qdhom/error.hpp"
#include "qdhom/fit/sweep.hpp"
#include "qdhom/fit/template_cache.hpp"
#include "qdhom/io/csv.hpp"
#include "qdhom/io/manifest.hpp"
#include "qdhom/io/provenance.hpp"
#include "qdhom/oracle/cascade_wavefunction.hpp"
#include "qdhom/simd/kernels.hpp"

#include <cmath>
#include <sstream>

namespace qdhom::io {
namespace {

namespace fs = std::filesystem;
using cascade::Line;
using nlohmann::json;

std::string num(double v) { return format_double(v); }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Provenance prepare(RunConfig& cfg, std::string_view command) {
    const simd::Isa isa = simd::parse_isa(cfg.isa);
    cfg.validate();
    simd::select(isa);
    cfg.isa = std::string(simd::to_string(isa));
    return {std::string(command), to_ini(cfg), cfg.isa, {}};
}

class Writer {
public:
    Writer(fs::path dir, const Provenance& prov, CommandResult& result)
        : dir_(std::move(dir)), prov_(prov), result_(result) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
        write_text_file(dir_ / "run.ini", prov_.config);
        result_.files.push_back(dir_ / "run.ini");
    }

    void table(const std::string& stem, const CsvTable& t, json meta = json::object()) {
        write_table(dir_, stem, t, prov_, std::move(meta));
        result_.files.push_back(dir_ / (stem + ".csv"));
        result_.files.push_back(dir_ / (stem + ".json"));
    }

    void histogram(const std::string& stem, const analysis::Histogram& h, json meta) {
        write_histogram_csv(dir_ / (stem + ".csv"), h);
        write_json(dir_ / (stem + ".json"), json{{"file", stem + ".csv"},
                                                 {"columns", {"time_ps", "counts"}},
                                                 {"metadata", std::move(meta)},
                                                 {"provenance", to_json(prov_)}});
        result_.files.push_back(dir_ / (stem + ".csv"));
        result_.files.push_back(dir_ / (stem + ".json"));
    }

    void document(const std::string& name, json j) {
        j["provenance"] = to_json(prov_);
        write_json(dir_ / name, j);
        result_.files.push_back(dir_ / name);
    }

private:
    fs::path dir_;
    const Provenance& prov_;
    CommandResult& result_;
};

std::vector<Line> selected_lines(const RunConfig& cfg) {
    switch (cfg.lines) {
    case LineSelection::biexciton: return {Line::biexciton};
    case LineSelection::exciton: return {Line::exciton};
    default: return {Line::biexciton, Line::exciton};
    }
}

DatasetManifest load_manifest(const RunConfig& cfg, Provenance& prov) {
    if (cfg.manifest.empty()) {
        throw ValidationError("io.manifest is required (set it in the config or pass --manifest)");
    }
    DatasetManifest m = read_manifest(cfg.manifest);
    prov.inputs.push_back(m.source);
    for (const auto& e : m.entries) {
        for (const auto* f : {&e.hom_b, &e.hom_x, &e.decay_b, &e.decay_x, &e.autocorrelation_b,
                              &e.autocorrelation_x}) {
            if (*f) prov.inputs.push_back((*f)->path);
        }
    }
    return m;
}

std::string where(const DatasetManifest& m, const ManifestEntry& e) {
    return m.source.string() + ":" + std::to_string(e.line) + ": ";
}

struct HomAnalysis {
    analysis::HomPeakCenters centers;
    analysis::PeakAreas areas;
    analysis::Estimate p0;
    analysis::Estimate visibility;
};

HomAnalysis analyze_hom(const analysis::Histogram& h, const RunConfig& cfg) {
    HomAnalysis a;
    a.centers = analysis::locate_hom_peaks(h, cfg.delay_ps, cfg.search_half_width_ps);
    a.areas = analysis::peak_areas(h, analysis::hom_windows(a.centers, cfg.half_width_bins));
    a.p0 = analysis::p0(a.areas);
    a.visibility = {analysis::visibility_from_p0(a.p0.value, cfg.p_inf),
                    analysis::visibility_sigma(a.p0.value, a.p0.sigma, cfg.p_inf)};
    return a;
}

struct EntryAnalysis {
    std::optional<HomAnalysis> hom[2];
    std::optional<analysis::LifetimeFit> decay[2];
    std::optional<analysis::G2Zero> g2[2];
};

int idx(Line l) { return l == Line::biexciton ? 0 : 1; }

EntryAnalysis analyze_entry(const DatasetManifest& m, const ManifestEntry& e, const RunConfig& cfg) {
    EntryAnalysis a;
    for (Line l : {Line::biexciton, Line::exciton}) {
        auto context = [&](const HistogramFile& f, auto&& fn) {
            try {
                return fn(f.data);
            } catch (const ValidationError& err) {
                throw ValidationError(where(m, e) + f.path.string() + ": " + err.what());
            } catch (const NumericalError& err) {
                throw NumericalError(where(m, e) + f.path.string() + ": " + err.what());
            }
        };
        if (const auto& f = e.hom(l)) {
            a.hom[idx(l)] = context(*f, [&](const auto& h) { return analyze_hom(h, cfg); });
        }
        if (const auto& f = e.decay(l)) {
            a.decay[idx(l)] =
                context(*f, [&](const auto& h) { return analysis::lifetime_fit(h, cfg.irf); });
        }
        if (const auto& f = e.autocorrelation(l)) {
            a.g2[idx(l)] = context(*f, [&](const auto& h) {
                return analysis::g2_zero(h, cfg.rep_period_ps, cfg.half_width_bins);
            });
        }
    }
    return a;
}

struct Lifetimes {
    double t1_b = 0.0;
    double t1_x = 0.0;
    std::string source_b, source_x;  // "manifest" or "decay_fit"
};

Lifetimes entry_lifetimes(const DatasetManifest& m, const ManifestEntry& e, const EntryAnalysis& a) {
    Lifetimes t;
    auto pick = [&](const std::optional<double>& given, const std::optional<analysis::LifetimeFit>& fit,
                    const char* name, double& value, std::string& source) {
        if (given) {
            value = *given;
            source = "manifest";
        } else if (fit) {
            value = fit->t1;
            source = "decay_fit";
        } else {
            throw ValidationError(where(m, e) + "no " + name + " lifetime: give t1_" +
                                  (name[0] == 'b' ? "b" : "x") + "_ps or a decay file");
        }
    };
    pick(e.t1_b_ps, a.decay[0], "biexciton", t.t1_b, t.source_b);
    pick(e.t1_x_ps, a.decay[1], "exciton", t.t1_x, t.source_x);
    return t;
}

std::unique_ptr<fit::TemplateCache> make_cache(const RunConfig& cfg) {
    return cfg.cache_dir.empty() ? std::make_unique<fit::TemplateCache>()
                                 : std::make_unique<fit::TemplateCache>(cfg.cache_dir);
}

struct EntryFit {
    Lifetimes t1;
    fit::FitResult result;
};

EntryFit fit_entry(const DatasetManifest& m, const ManifestEntry& e, const EntryAnalysis& a,
                   const RunConfig& cfg, fit::TemplateCache& cache) {
    std::vector<fit::LineData> data;
    for (Line l : {Line::biexciton, Line::exciton}) {
        if (const auto& f = e.hom(l)) data.push_back({l, f->data});
    }
    if (data.empty()) throw ValidationError(where(m, e) + "fit needs at least one hom_* file");
    EntryFit r;
    r.t1 = entry_lifetimes(m, e, a);
    try {
        r.result = fit::grid_fit(data, r.t1.t1_b, r.t1.t1_x, cfg.fit_options(), cache);
    } catch (const NumericalError& err) {
        throw NumericalError(where(m, e) + err.what());
    }
    return r;
}

json fit_settings(const RunConfig& cfg) {
    return {{"objective", fit::to_string(cfg.objective)},
            {"normalization", fit::to_string(cfg.normalization)},
            {"chi2_half_range_ps", cfg.chi2_half_range_ps},
            {"t2b_grid", {cfg.grid.t2b.min, cfg.grid.t2b.max, cfg.grid.t2b.step}},
            {"t2x_grid", {cfg.grid.t2x.min, cfg.grid.t2x.max, cfg.grid.t2x.step}}};
}

CsvTable fit_table(const DatasetManifest& m, const std::vector<EntryFit>& fits) {
    CsvTable t{{"temperature_k", "t1_b_ps", "t1_x_ps", "t2_b_ps", "t2_b_uncertainty_ps", "t2_x_ps",
                "t2_x_uncertainty_ps", "t2_star_b_ps", "t2_star_x_ps", "objective_value",
                "tied_nodes", "feasible_nodes", "infeasible_nodes"},
               {}};
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& f = fits[i].result;
        t.rows.push_back({num(m.entries[i].temperature_k), num(fits[i].t1.t1_b), num(fits[i].t1.t1_x),
                          num(f.t2b), num(f.uncertainty_b), num(f.t2x), num(f.uncertainty_x),
                          num(f.t2_star_b.value), num(f.t2_star_x.value), num(f.objective_value),
                          std::to_string(f.tied_nodes), std::to_string(f.feasible),
                          std::to_string(f.infeasible)});
    }
    return t;
}

CsvTable fit_nodes_table(const DatasetManifest& m, const std::vector<EntryFit>& fits) {
    CsvTable t{{"temperature_k", "t2_b_ps", "t2_x_ps", "feasible", "objective"}, {}};
    for (std::size_t i = 0; i < fits.size(); ++i) {
        for (const auto& n : fits[i].result.nodes) {
            t.rows.push_back({num(m.entries[i].temperature_k), num(n.t2b), num(n.t2x),
                              n.feasible ? "1" : "0", n.feasible ? num(n.objective) : ""});
        }
    }
    return t;
}

json fit_json(const DatasetManifest& m, const std::vector<EntryFit>& fits) {
    json entries = json::array();
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& f = fits[i].result;
        entries.push_back({{"temperature_k", m.entries[i].temperature_k},
                           {"t1_b_ps", fits[i].t1.t1_b},
                           {"t1_b_source", fits[i].t1.source_b},
                           {"t1_x_ps", fits[i].t1.t1_x},
                           {"t1_x_source", fits[i].t1.source_x},
                           {"t2_b_ps", f.t2b},
                           {"t2_x_ps", f.t2x},
                           {"uncertainty_b_ps", f.uncertainty_b},
                           {"uncertainty_x_ps", f.uncertainty_x},
                           {"t2_star_b_ps", json_number(f.t2_star_b.value)},
                           {"t2_star_b_radiative_limited", f.t2_star_b.radiative_limited},
                           {"t2_star_x_ps", json_number(f.t2_star_x.value)},
                           {"t2_star_x_radiative_limited", f.t2_star_x.radiative_limited},
                           {"objective_value", f.objective_value},
                           {"tied_nodes", f.tied_nodes},
                           {"feasible_nodes", f.feasible},
                           {"infeasible_nodes", f.infeasible}});
    }
    return entries;
}

CsvTable analysis_table(const DatasetManifest& m, const std::vector<EntryAnalysis>& all) {
    CsvTable t{{"temperature_k", "line", "p0", "p0_sigma", "visibility", "visibility_sigma",
                "area_left", "area_central", "area_right", "t1_ps", "t1_sigma_ps", "lifetime_model",
                "g2_zero", "g2_zero_sigma"},
               {}};
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (Line l : {Line::biexciton, Line::exciton}) {
            const auto& h = all[i].hom[idx(l)];
            const auto& d = all[i].decay[idx(l)];
            const auto& g = all[i].g2[idx(l)];
            if (!h && !d && !g) continue;
            std::vector<std::string> row{num(m.entries[i].temperature_k), std::string(to_string(l))};
            if (h) {
                for (double v : {h->p0.value, h->p0.sigma, h->visibility.value, h->visibility.sigma,
                                 h->areas.left, h->areas.central, h->areas.right}) {
                    row.push_back(num(v));
                }
            } else {
                row.insert(row.end(), 7, "");
            }
            if (d) {
                row.push_back(num(d->t1));
                row.push_back(num(d->uncertainty));
                row.push_back(std::string(analysis::to_string(d->model)));
            } else {
                row.insert(row.end(), 3, "");
            }
            if (g) {
                row.push_back(num(g->value));
                row.push_back(num(g->sigma));
            } else {
                row.insert(row.end(), 2, "");
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

json analysis_settings(const RunConfig& cfg) {
    return {{"p_inf", cfg.p_inf},
            {"half_width_bins", cfg.half_width_bins},
            {"delay_ps", cfg.delay_ps},
            {"search_half_width_ps", cfg.search_half_width_ps},
            {"rep_period_ps", cfg.rep_period_ps},
            {"irf", hom::to_string(cfg.irf.shape)},
            {"irf_fwhm_ps", cfg.irf.fwhm_ps}};
}

}  // namespace

CommandResult run_simulate(RunConfig cfg, const fs::path& out_dir) {
    const Provenance prov = prepare(cfg, "simulate");
    const cascade::QDParams p = cfg.qd_params();
    const hom::SimulationOptions sim = cfg.simulation_options();

    struct LineRun {
        hom::HomResult r;
        std::optional<analysis::Histogram> noisy;
        std::optional<HomAnalysis> noisy_analysis;
    };
    std::vector<LineRun> runs;
    for (Line l : selected_lines(cfg)) {
        LineRun run{hom::simulate_hom(p, l, sim), std::nullopt, std::nullopt};
        if (cfg.central_counts > 0.0) {
            if (!(run.r.areas.central > 0.0)) {
                throw NumericalError("central peak is empty; cannot scale to simulate.central_counts");
            }
            const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(idx(l));
            run.noisy = analysis::poisson_sample(
                analysis::scaled(run.r.pattern, cfg.central_counts / run.r.areas.central), seed);
            run.noisy_analysis = analyze_hom(*run.noisy, cfg);
        }
        runs.push_back(std::move(run));
    }

    CommandResult result;
    Writer w(out_dir, prov, result);
    CsvTable summary{{"line", "p0", "visibility", "p_inf", "area_left", "area_central", "area_right",
                      "coherence_time_ps", "clamped", "min_raw", "noisy_p0", "noisy_p0_sigma",
                      "noisy_visibility"},
                     {}};
    json lines = json::array();
    std::ostringstream report;
    for (const auto& run : runs) {
        const auto& r = run.r;
        const std::string name(to_string(r.line));
        if (r.g2_tau.values.size() != r.side.values.size()) {
            throw NumericalError("HOM and reference curves are on different grids");
        }
        CsvTable curve{{"tau_ps", "g2_hom", "distinguishable"}, {}};
        for (std::size_t k = 0; k < r.g2_tau.values.size(); ++k) {
            curve.rows.push_back(
                {num(r.g2_tau.grid.at(k)), num(r.g2_tau.values[k]), num(r.side.values[k])});
        }
        const json grid{{"t_start_ps", r.t_grid.start()},
                        {"t_step_ps", r.t_grid.step()},
                        {"points", r.t_grid.count()}};
        w.table("hom_" + name, curve, {{"line", name}, {"grid", grid}});
        w.histogram("pattern_" + name, r.pattern,
                    {{"line", name}, {"delay_ps", hom::aligned_delay(sim.pattern)}, {"noise", false}});
        if (run.noisy) {
            w.histogram("pattern_" + name + "_noisy", *run.noisy,
                        {{"line", name},
                         {"delay_ps", hom::aligned_delay(sim.pattern)},
                         {"noise", true},
                         {"central_counts", cfg.central_counts},
                         {"seed", cfg.seed + static_cast<std::uint64_t>(idx(r.line))}});
        }
        const double t2 = 1.0 / cascade::coherence_rate(p, r.line);
        const auto& na = run.noisy_analysis;
        summary.rows.push_back(
            {name, num(r.p0), num(r.visibility), num(r.p_inf), num(r.areas.left),
             num(r.areas.central), num(r.areas.right), num(t2), std::to_string(r.clamped),
             num(r.min_raw), na ? num(na->p0.value) : "", na ? num(na->p0.sigma) : "",
             na ? num(na->visibility.value) : ""});
        json entry{{"line", name},
                   {"p0", r.p0},
                   {"visibility", r.visibility},
                   {"p_inf", r.p_inf},
                   {"areas", {r.areas.left, r.areas.central, r.areas.right}},
                   {"coherence_time_ps", t2},
                   {"clamped", r.clamped},
                   {"min_raw", r.min_raw},
                   {"grid", grid}};
        if (na) {
            entry["noisy"] = {{"p0", na->p0.value},
                              {"p0_sigma", na->p0.sigma},
                              {"visibility", na->visibility.value},
                              {"visibility_sigma", na->visibility.sigma}};
        }
        lines.push_back(std::move(entry));
        report << name << ": P0 = " << num(r.p0) << ", V = " << num(r.visibility) << '\n';
    }
    const json params{{"gamma_b_per_ps", p.gamma_b},
                      {"gamma_x_per_ps", p.gamma_x},
                      {"deph_b_per_ps", p.deph_b},
                      {"deph_x_per_ps", p.deph_x}};
    w.table("summary", summary, {{"parameters", params}});
    w.document("result.json", {{"command", "simulate"}, {"parameters", params}, {"lines", lines}});
    result.summary = report.str();
    return result;
}

CommandResult run_analyze(RunConfig cfg, const fs::path& out_dir) {
    Provenance prov = prepare(cfg, "analyze");
    const DatasetManifest m = load_manifest(cfg, prov);
    std::vector<EntryAnalysis> all;
    for (const auto& e : m.entries) all.push_back(analyze_entry(m, e, cfg));

    CommandResult result;
    Writer w(out_dir, prov, result);
    const CsvTable t = analysis_table(m, all);
    w.table("analysis", t, analysis_settings(cfg));
    result.summary = std::to_string(t.rows.size()) + " rows written to analysis.csv\n";
    return result;
}

CommandResult run_fit(RunConfig cfg, const fs::path& out_dir) {
    Provenance prov = prepare(cfg, "fit");
    const DatasetManifest m = load_manifest(cfg, prov);
    auto cache = make_cache(cfg);
    std::vector<EntryFit> fits;
    for (const auto& e : m.entries) {
        const EntryAnalysis a = analyze_entry(m, e, cfg);
        fits.push_back(fit_entry(m, e, a, cfg, *cache));
    }

    CommandResult result;
    Writer w(out_dir, prov, result);
    w.table("fit_results", fit_table(m, fits), fit_settings(cfg));
    w.table("fit_nodes", fit_nodes_table(m, fits), fit_settings(cfg));
    w.document("result.json",
               {{"command", "fit"}, {"settings", fit_settings(cfg)}, {"entries", fit_json(m, fits)}});
    std::ostringstream report;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        report << num(m.entries[i].temperature_k) << " K: T2b = " << num(fits[i].result.t2b)
               << " ps, T2x = " << num(fits[i].result.t2x) << " ps\n";
    }
    report << "templates: " << cache->computed() << " computed, " << cache->memory_hits()
           << " memory hits, " << cache->disk_hits() << " disk hits\n";
    result.summary = report.str();
    return result;
}

CommandResult run_sweep(RunConfig cfg, const fs::path& out_dir) {
    Provenance prov = prepare(cfg, "sweep");
    const DatasetManifest m = load_manifest(cfg, prov);
    for (const auto& e : m.entries) {
        if (!e.hom_b || !e.hom_x) {
            throw ValidationError(where(m, e) + "sweep needs hom_biexciton and hom_exciton");
        }
    }
    auto cache = make_cache(cfg);
    std::vector<EntryAnalysis> all;
    std::vector<EntryFit> fits;
    std::vector<fit::SweepEntry> entries;
    for (const auto& e : m.entries) {
        all.push_back(analyze_entry(m, e, cfg));
        fits.push_back(fit_entry(m, e, all.back(), cfg, *cache));
        entries.push_back({e.temperature_k, fits.back().t1.t1_b, fits.back().t1.t1_x,
                           all.back().hom[0]->p0, all.back().hom[1]->p0, fits.back().result});
    }
    const fit::SweepTable table = fit::temperature_sweep(entries, cfg.p_inf);

    CommandResult result;
    Writer w(out_dir, prov, result);
    CsvTable sweep{{"temperature_k", "p0_b", "p0_b_sigma", "p0_x", "p0_x_sigma", "visibility_b",
                    "visibility_b_sigma", "visibility_x", "visibility_x_sigma", "t2_b_ps", "t2_x_ps",
                    "t2_star_b_ps", "t2_star_x_ps"},
                   {}};
    for (const auto& r : table.rows) {
        sweep.rows.push_back({num(r.temperature_k), num(r.p0_b.value), num(r.p0_b.sigma),
                              num(r.p0_x.value), num(r.p0_x.sigma), num(r.v_b.value),
                              num(r.v_b.sigma), num(r.v_x.value), num(r.v_x.sigma),
                              num(r.fit->t2b), num(r.fit->t2x), num(r.fit->t2_star_b.value),
                              num(r.fit->t2_star_x.value)});
    }
    const auto& s = table.summary;
    CsvTable summary{{"quantity", "change_pct"},
                     {{"p0_b", num(s.p0_b_change_pct)},
                      {"p0_x", num(s.p0_x_change_pct)},
                      {"visibility_b", num(s.v_b_change_pct)},
                      {"visibility_x", num(s.v_x_change_pct)}}};
    w.table("analysis", analysis_table(m, all), analysis_settings(cfg));
    w.table("fit_results", fit_table(m, fits), fit_settings(cfg));
    w.table("sweep", sweep, fit_settings(cfg));
    w.table("sweep_summary", summary,
            {{"definition", "(first - last) / first * 100, positive for a decrease"}});
    w.document("result.json", {{"command", "sweep"},
                               {"settings", fit_settings(cfg)},
                               {"entries", fit_json(m, fits)},
                               {"summary",
                                {{"p0_b_change_pct", s.p0_b_change_pct},
                                 {"p0_x_change_pct", s.p0_x_change_pct},
                                 {"visibility_b_change_pct", s.v_b_change_pct},
                                 {"visibility_x_change_pct", s.v_x_change_pct}}}});
    std::ostringstream report;
    report << "P0 change: b " << num(s.p0_b_change_pct) << "%, x " << num(s.p0_x_change_pct)
           << "%; visibility change: b " << num(s.v_b_change_pct) << "%, x "
           << num(s.v_x_change_pct) << "%\n";
    result.summary = report.str();
    return result;
}

CommandResult run_purity(RunConfig cfg, const fs::path& out_dir) {
    const Provenance prov = prepare(cfg, "purity");
    const cascade::QDParams p = cfg.qd_params();
    const double gx = p.gamma_x;

    CsvTable table{{"gamma_ratio", "t1_b_ps", "t1_x_ps", "purity_x", "purity_b", "closed_form",
                    "abs_error"},
                   {}};
    auto row = [&](double gb, double g_x) {
        const double window = cfg.purity_window_factor * std::max(1.0 / gb, 1.0 / g_x);
        const auto wf = oracle::wavefunction_grid(gb, g_x, window, cfg.purity_n);
        const auto r = oracle::reduced_purity(wf);
        table.rows.push_back({num(gb / g_x), num(1.0 / gb), num(1.0 / g_x), num(r.purity_x),
                              num(r.purity_b), num(r.closed_form),
                              num(std::abs(r.purity_x - r.closed_form))});
    };
    row(p.gamma_b, gx);
    for (double ratio : cfg.purity_ratios) row(ratio * gx, gx);

    CsvTable conv{{"n", "purity_x", "closed_form", "abs_error"}, {}};
    const double window = cfg.purity_window_factor * p.max_t1();
    for (std::size_t n : cfg.purity_refine) {
        const auto r = oracle::reduced_purity(oracle::wavefunction_grid(p.gamma_b, gx, window, n));
        conv.rows.push_back({std::to_string(n), num(r.purity_x), num(r.closed_form),
                             num(std::abs(r.purity_x - r.closed_form))});
    }

    CommandResult result;
    Writer w(out_dir, prov, result);
    const json meta{{"n", cfg.purity_n}, {"window_factor", cfg.purity_window_factor},
                    {"first_row", "configured lifetimes"}};
    w.table("purity", table, meta);
    w.table("purity_convergence", conv, {{"window_ps", window}});
    result.summary = "purity at configured lifetimes: " + table.rows.front()[3] +
                     " (closed form " + table.rows.front()[5] + ")\n";
    return result;
}

CommandResult run_command(std::string_view name, RunConfig cfg, const fs::path& out_dir) {
    if (name == "simulate") return run_simulate(std::move(cfg), out_dir);
    if (name == "fit") return run_fit(std::move(cfg), out_dir);
    if (name == "analyze") return run_analyze(std::move(cfg), out_dir);
    if (name == "purity") return run_purity(std::move(cfg), out_dir);
    if (name == "sweep") return run_sweep(std::move(cfg), out_dir);
    throw ValidationError("unknown command '" + std::string(name) + "'");
}

}  // namespace qdhom::io
