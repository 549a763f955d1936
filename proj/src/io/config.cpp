#include "qdhom/io/config.hpp"

#include "qdhom/error.hpp"
#include "qdhom/io/csv.hpp"

#include <json.hpp>

#include <functional>
#include <sstream>

namespace qdhom::io {
namespace {

namespace fs = std::filesystem;

using Setter = std::function<void(RunConfig&, const std::string&, const fs::path&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
    const char* section;
    const char* key;
    const char* help;
    Setter set;
    Getter get;
};

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ", ";
        s += parts[i];
    }
    return s;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(v);
    while (std::getline(in, cur, ',')) {
        const auto a = cur.find_first_not_of(" \t");
        const auto b = cur.find_last_not_of(" \t");
        if (a == std::string::npos) throw ValidationError("empty item in list '" + v + "'");
        out.push_back(cur.substr(a, b - a + 1));
    }
    if (out.empty()) throw ValidationError("list must not be empty");
    return out;
}

std::string resolve_path(const std::string& v, const fs::path& base) {
    if (v.empty()) return v;
    fs::path p(v);
    if (p.is_relative()) p = base / p;
    return fs::absolute(p).lexically_normal().string();
}

enum class Bound { any, positive, nonnegative };

double bounded(const std::string& v, const std::string& name, Bound b) {
    const double x = parse_double(v, name);
    if (b == Bound::positive && !(x > 0.0)) throw ValidationError(name + " must be positive");
    if (b == Bound::nonnegative && !(x >= 0.0)) throw ValidationError(name + " must be >= 0");
    return x;
}

Field real(const char* s, const char* k, const char* help, double RunConfig::*m,
           Bound b = Bound::any) {
    return {s, k, help,
            [m, s, k, b](RunConfig& c, const std::string& v, const fs::path&) {
                c.*m = bounded(v, std::string(s) + "." + k, b);
            },
            [m](const RunConfig& c) { return format_double(c.*m); }};
}

Field optional_real(const char* s, const char* k, const char* help,
                    std::optional<double> RunConfig::*m, Bound b = Bound::any) {
    return {s, k, help,
            [m, s, k, b](RunConfig& c, const std::string& v, const fs::path&) {
                if (v == "none" || v.empty()) {
                    c.*m = std::nullopt;
                } else {
                    c.*m = bounded(v, std::string(s) + "." + k, b);
                }
            },
            [m](const RunConfig& c) { return (c.*m) ? format_double(*(c.*m)) : std::string("none"); }};
}

template <typename Int>
Field integer(const char* s, const char* k, const char* help, Int RunConfig::*m) {
    return {s, k, help,
            [m, s, k](RunConfig& c, const std::string& v, const fs::path&) {
                const long long x = parse_integer(v, std::string(s) + "." + k);
                if (x < 0) throw ValidationError(std::string(s) + "." + k + " must be >= 0");
                c.*m = static_cast<Int>(x);
            },
            [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

Field text(const char* s, const char* k, const char* help, std::string RunConfig::*m,
           bool is_path) {
    return {s, k, help,
            [m, is_path](RunConfig& c, const std::string& v, const fs::path& base) {
                c.*m = is_path ? resolve_path(v, base) : v;
            },
            [m](const RunConfig& c) { return c.*m; }};
}

Field range_field(const char* k, const char* help, fit::Range fit::FitGrid::*r, double fit::Range::*part) {
    return {"fit", k, help,
            [r, part, k](RunConfig& c, const std::string& v, const fs::path&) {
                c.grid.*r.*part = bounded(v, std::string("fit.") + k, Bound::positive);
            },
            [r, part](const RunConfig& c) { return format_double(c.grid.*r.*part); }};
}

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = [] {
        std::vector<Field> f;
        f.push_back(real("model", "t1_b_ps", "biexciton lifetime", &RunConfig::t1_b_ps, Bound::positive));
        f.push_back(real("model", "t1_x_ps", "exciton lifetime", &RunConfig::t1_x_ps, Bound::positive));
        f.push_back(real("model", "deph_b_per_ps", "projector dephasing rate on |b>",
                         &RunConfig::deph_b_per_ps, Bound::nonnegative));
        f.push_back(real("model", "deph_x_per_ps", "projector dephasing rate on |x>",
                         &RunConfig::deph_x_per_ps, Bound::nonnegative));
        f.push_back(optional_real("model", "t2_b_ps",
                                  "target biexciton-line coherence time (with t2_x_ps; replaces deph_*)",
                                  &RunConfig::t2_b_ps, Bound::positive));
        f.push_back(optional_real("model", "t2_x_ps", "target exciton-line coherence time",
                                  &RunConfig::t2_x_ps, Bound::positive));
        f.push_back({"model", "initial_state", "biexciton_prepared or pulse_driven",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         if (v == "biexciton_prepared") {
                             c.initial_state = cascade::InitialState::biexciton_prepared;
                         } else if (v == "pulse_driven") {
                             c.initial_state = cascade::InitialState::pulse_driven;
                         } else {
                             throw ValidationError("model.initial_state: expected biexciton_prepared or pulse_driven, got '" + v + "'");
                         }
                     },
                     [](const RunConfig& c) {
                         return std::string(c.initial_state == cascade::InitialState::biexciton_prepared
                                                ? "biexciton_prepared"
                                                : "pulse_driven");
                     }});
        f.push_back({"model", "pulse_area_rad", "two-photon pulse area (pulse_driven only)",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.pulse.area = bounded(v, "model.pulse_area_rad", Bound::positive);
                     },
                     [](const RunConfig& c) { return format_double(c.pulse.area); }});
        f.push_back({"model", "pulse_fwhm_ps", "pulse intensity fwhm (pulse_driven only)",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.pulse.fwhm_ps = bounded(v, "model.pulse_fwhm_ps", Bound::positive);
                     },
                     [](const RunConfig& c) { return format_double(c.pulse.fwhm_ps); }});
        f.push_back(optional_real("model", "temperature_k", "metadata only",
                                  &RunConfig::temperature_k, Bound::nonnegative));

        f.push_back({"sensor", "coherence_source", "sensor or direct",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.coherence_source = cascade::parse_coherence_source(v);
                     },
                     [](const RunConfig& c) { return std::string(cascade::to_string(c.coherence_source)); }});
        f.push_back(real("sensor", "epsilon_rel", "sensor coupling / gamma_b", &RunConfig::epsilon_rel, Bound::positive));
        f.push_back(real("sensor", "width_rel", "sensor linewidth / (gamma_b + gamma_x)",
                         &RunConfig::width_rel, Bound::positive));

        f.push_back(real("grid", "window_ps", "t and tau window; 0 = 10 max(T1)", &RunConfig::window_ps, Bound::nonnegative));
        f.push_back(integer("grid", "points", "points per axis", &RunConfig::points));
        f.push_back(real("grid", "integrator_step_ps", "RK4 step; 0 = 1/(200 fastest rate)",
                         &RunConfig::integrator_step_ps, Bound::nonnegative));
        f.push_back(real("grid", "max_local_error", "step-doubling error budget",
                         &RunConfig::max_local_error, Bound::positive));

        f.push_back({"irf", "shape", "gaussian or delta",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.irf.shape = hom::parse_irf_shape(v);
                     },
                     [](const RunConfig& c) { return std::string(hom::to_string(c.irf.shape)); }});
        f.push_back({"irf", "fwhm_ps", "Gaussian IRF fwhm",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.irf.fwhm_ps = bounded(v, "irf.fwhm_ps", Bound::nonnegative);
                     },
                     [](const RunConfig& c) { return format_double(c.irf.fwhm_ps); }});

        f.push_back(real("pattern", "delay_ps", "side-peak delay", &RunConfig::delay_ps, Bound::positive));
        f.push_back(real("pattern", "bin_ps", "bin width of synthesized histograms", &RunConfig::bin_ps, Bound::positive));
        f.push_back(integer("pattern", "half_width_bins", "peak window half-width (70 -> 141 bins)",
                            &RunConfig::half_width_bins));
        f.push_back(real("pattern", "p_inf", "P0 of distinguishable photons", &RunConfig::p_inf, Bound::positive));
        f.push_back(real("pattern", "max_truncation", "largest peak fraction allowed outside its cell",
                         &RunConfig::max_truncation, Bound::positive));
        f.push_back({"pattern", "normalization", "template scaling: area or max",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.normalization = fit::parse_normalization(v);
                     },
                     [](const RunConfig& c) { return std::string(fit::to_string(c.normalization)); }});

        f.push_back({"simulate", "lines", "both, biexciton or exciton",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         if (v == "both") c.lines = LineSelection::both;
                         else if (v == "biexciton") c.lines = LineSelection::biexciton;
                         else if (v == "exciton") c.lines = LineSelection::exciton;
                         else throw ValidationError("simulate.lines: expected both, biexciton or exciton, got '" + v + "'");
                     },
                     [](const RunConfig& c) {
                         switch (c.lines) {
                         case LineSelection::biexciton: return std::string("biexciton");
                         case LineSelection::exciton: return std::string("exciton");
                         default: return std::string("both");
                         }
                     }});
        f.push_back(real("simulate", "central_counts",
                         "expected central-peak counts of noisy patterns; 0 = noiseless",
                         &RunConfig::central_counts, Bound::nonnegative));
        f.push_back({"simulate", "seed", "random seed for Poisson noise",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         const long long x = parse_integer(v, "simulate.seed");
                         if (x < 0) throw ValidationError("simulate.seed must be >= 0");
                         c.seed = static_cast<std::uint64_t>(x);
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});

        f.push_back(range_field("t2b_min_ps", "biexciton T2 grid start", &fit::FitGrid::t2b, &fit::Range::min));
        f.push_back(range_field("t2b_max_ps", "biexciton T2 grid end", &fit::FitGrid::t2b, &fit::Range::max));
        f.push_back(range_field("t2b_step_ps", "biexciton T2 grid step", &fit::FitGrid::t2b, &fit::Range::step));
        f.push_back(range_field("t2x_min_ps", "exciton T2 grid start", &fit::FitGrid::t2x, &fit::Range::min));
        f.push_back(range_field("t2x_max_ps", "exciton T2 grid end", &fit::FitGrid::t2x, &fit::Range::max));
        f.push_back(range_field("t2x_step_ps", "exciton T2 grid step", &fit::FitGrid::t2x, &fit::Range::step));
        f.push_back({"fit", "objective", "shape_chi2 or p0_match",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.objective = fit::parse_objective(v);
                     },
                     [](const RunConfig& c) { return std::string(fit::to_string(c.objective)); }});
        f.push_back(real("fit", "chi2_half_range_ps", "central region compared by shape_chi2",
                         &RunConfig::chi2_half_range_ps, Bound::positive));
        f.push_back(real("fit", "search_half_width_ps", "side-peak search half-width around +-delay",
                         &RunConfig::search_half_width_ps, Bound::positive));
        f.push_back(text("fit", "cache_dir", "on-disk template cache; empty = memory only",
                         &RunConfig::cache_dir, true));
        f.push_back(integer("fit", "threads", "worker threads; 0 = all cores", &RunConfig::threads));

        f.push_back(integer("purity", "n", "lattice points per axis", &RunConfig::purity_n));
        f.push_back(real("purity", "window_factor", "window in units of max(T1)",
                         &RunConfig::purity_window_factor, Bound::positive));
        f.push_back({"purity", "ratios", "gamma_b / gamma_x values to tabulate",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.purity_ratios.clear();
                         for (const auto& item : split_list(v)) {
                             c.purity_ratios.push_back(parse_double(item, "purity.ratios"));
                         }
                     },
                     [](const RunConfig& c) {
                         std::vector<std::string> parts;
                         for (double r : c.purity_ratios) parts.push_back(format_double(r));
                         return join(parts);
                     }});
        f.push_back({"purity", "refine", "lattice sizes for the convergence table",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.purity_refine.clear();
                         for (const auto& item : split_list(v)) {
                             const long long n = parse_integer(item, "purity.refine");
                             if (n < 0) throw ValidationError("purity.refine entries must be positive");
                             c.purity_refine.push_back(static_cast<std::size_t>(n));
                         }
                     },
                     [](const RunConfig& c) {
                         std::vector<std::string> parts;
                         for (auto n : c.purity_refine) parts.push_back(std::to_string(n));
                         return join(parts);
                     }});

        f.push_back(real("analysis", "rep_period_ps", "laser repetition period for g2(0)",
                         &RunConfig::rep_period_ps, Bound::positive));

        f.push_back(text("io", "manifest", "dataset manifest for fit, analyze and sweep",
                         &RunConfig::manifest, true));

        f.push_back({"runtime", "isa", "kernel instruction set: auto, scalar or avx2",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         simd::parse_isa(v);
                         c.isa = v;
                     },
                     [](const RunConfig& c) { return c.isa; }});
        return f;
    }();
    return fields;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : schema()) {
        if (section == f.section && key == f.key) return &f;
    }
    return nullptr;
}

bool known_section(const std::string& s) {
    for (const auto& f : schema()) {
        if (s == f.section) return true;
    }
    return false;
}

}  // namespace

void apply_ini(RunConfig& cfg, const ConfigSource& src) {
    const auto& doc = src.document;
    for (const auto& sec : doc.sections) {
        if (sec.name.empty()) {
            if (!sec.entries.empty()) {
                throw ValidationError(doc.source + ":" + std::to_string(sec.entries.front().line) +
                                      ": key '" + sec.entries.front().key +
                                      "' appears before any [section]");
            }
            continue;
        }
        if (!known_section(sec.name)) {
            throw ValidationError(doc.source + ":" + std::to_string(sec.line) +
                                  ": unknown section [" + sec.name + "]");
        }
        for (const auto& e : sec.entries) {
            const Field* f = find_field(sec.name, e.key);
            if (!f) {
                throw ValidationError(doc.source + ":" + std::to_string(e.line) + ": unknown key '" +
                                      e.key + "' in [" + sec.name + "]");
            }
            try {
                f->set(cfg, e.value, src.base_dir);
            } catch (const ValidationError& err) {
                throw ValidationError(doc.source + ":" + std::to_string(e.line) + ": " + err.what());
            }
        }
    }
}

void apply_override(RunConfig& cfg, const std::string& assignment, const fs::path& base_dir) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ValidationError("override '" + assignment + "' must look like section.key=value");
    }
    const std::string section = assignment.substr(0, dot);
    const std::string key = assignment.substr(dot + 1, eq - dot - 1);
    const Field* f = find_field(section, key);
    if (!f) throw ValidationError("override '" + assignment + "': unknown key " + section + "." + key);
    try {
        f->set(cfg, assignment.substr(eq + 1), base_dir);
    } catch (const ValidationError& err) {
        throw ValidationError("override '" + assignment + "': " + err.what());
    }
}

RunConfig load_config(const fs::path& path) {
    RunConfig cfg;
    const fs::path base = fs::absolute(path).parent_path();
    if (path.extension() == ".json") {
        const std::string text = read_text_file(path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ": not valid JSON: " + e.what());
        }
        const auto* prov = j.contains("provenance") ? &j["provenance"] : &j;
        if (!prov->is_object() || !prov->contains("config") || !(*prov)["config"].is_string()) {
            throw ValidationError(path.string() + ": no provenance config block");
        }
        apply_ini(cfg, {parse_ini((*prov)["config"].get<std::string>(),
                                  path.string() + " (provenance config)"),
                        base});
        return cfg;
    }
    apply_ini(cfg, {read_ini(path), base});
    return cfg;
}

std::string to_ini(const RunConfig& cfg) {
    std::string out;
    std::string current;
    for (const auto& f : schema()) {
        if (current != f.section) {
            if (!current.empty()) out += '\n';
            current = f.section;
            out += '[' + current + "]\n";
        }
        out += f.key;
        out += " = ";
        out += f.get(cfg);
        out += '\n';
    }
    return out;
}

std::vector<KeyDoc> config_keys() {
    std::vector<KeyDoc> docs;
    for (const auto& f : schema()) docs.push_back({f.section, f.key, f.help});
    return docs;
}

cascade::QDParams RunConfig::qd_params() const {
    if (!(t1_b_ps > 0.0) || !(t1_x_ps > 0.0)) {
        throw ValidationError("model: lifetimes must be positive");
    }
    cascade::QDParams p = cascade::QDParams::from_lifetimes(t1_b_ps, t1_x_ps, deph_b_per_ps,
                                                            deph_x_per_ps);
    if (t2_b_ps.has_value() != t2_x_ps.has_value()) {
        throw ValidationError("model: t2_b_ps and t2_x_ps must be given together");
    }
    if (t2_b_ps) {
        if (deph_b_per_ps != 0.0 || deph_x_per_ps != 0.0) {
            throw ValidationError("model: give either t2_*_ps or deph_*_per_ps, not both");
        }
        const auto r = cascade::dephasing_from_t2(p.gamma_b, p.gamma_x, *t2_b_ps, *t2_x_ps);
        p.deph_b = r.deph_b;
        p.deph_x = r.deph_x;
    }
    p.initial_state = initial_state;
    p.pulse = pulse;
    p.validate();
    return p;
}

hom::SimulationOptions RunConfig::simulation_options() const {
    hom::SimulationOptions s;
    s.line.source = coherence_source;
    s.line.eps_rel = epsilon_rel;
    s.line.width_rel = width_rel;
    s.line.integrator.step = integrator_step_ps;
    s.line.integrator.max_local_error = max_local_error;
    s.window_ps = window_ps;
    s.points = points;
    s.irf = irf;
    s.pattern.delay_ps = delay_ps;
    s.pattern.bin_ps = bin_ps;
    s.pattern.max_truncation = max_truncation;
    s.half_width_bins = half_width_bins;
    s.p_inf = p_inf;
    return s;
}

fit::FitOptions RunConfig::fit_options() const {
    fit::FitOptions o;
    o.grid = grid;
    o.objective = objective;
    o.normalization = normalization;
    o.chi2_half_range_ps = chi2_half_range_ps;
    o.search_half_width_ps = search_half_width_ps;
    o.sim = simulation_options();
    o.initial_state = initial_state;
    o.pulse = pulse;
    o.threads = threads;
    return o;
}

void RunConfig::validate() const {
    const cascade::QDParams p = qd_params();
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ValidationError(msg);
    };
    require(epsilon_rel > 0.0, "sensor.epsilon_rel must be positive");
    require(width_rel > 0.0, "sensor.width_rel must be positive");
    if (coherence_source == cascade::CoherenceSource::sensor) {
        cascade::default_sensor(p, cascade::Line::biexciton, epsilon_rel, width_rel).validate();
    }
    require(window_ps >= 0.0, "grid.window_ps must be >= 0");
    require(points >= 2, "grid.points must be >= 2");
    require(integrator_step_ps >= 0.0, "grid.integrator_step_ps must be >= 0");
    require(max_local_error > 0.0, "grid.max_local_error must be positive");
    irf.validate();
    require(delay_ps > 0.0, "pattern.delay_ps must be positive");
    require(bin_ps > 0.0, "pattern.bin_ps must be positive");
    require(half_width_bins >= 1, "pattern.half_width_bins must be >= 1");
    require(p_inf > 0.0, "pattern.p_inf must be positive");
    require(max_truncation > 0.0 && max_truncation < 1.0, "pattern.max_truncation must be in (0, 1)");
    require(static_cast<double>(2 * half_width_bins + 1) * bin_ps <= delay_ps,
            "pattern: peak windows of 2*half_width_bins+1 bins overlap at this delay");
    require(central_counts >= 0.0, "simulate.central_counts must be >= 0");
    grid.validate();
    require(chi2_half_range_ps > 0.0, "fit.chi2_half_range_ps must be positive");
    require(search_half_width_ps > 0.0 && search_half_width_ps < delay_ps,
            "fit.search_half_width_ps must be positive and below the delay");
    require(purity_n >= 64, "purity.n must be >= 64");
    require(purity_window_factor >= 5.0, "purity.window_factor must be >= 5");
    for (double r : purity_ratios) require(r > 0.0, "purity.ratios must be positive");
    for (auto n : purity_refine) require(n >= 64, "purity.refine entries must be >= 64");
    require(rep_period_ps > 0.0, "analysis.rep_period_ps must be positive");
    simd::parse_isa(isa);
}

}  // namespace qdhom::io
