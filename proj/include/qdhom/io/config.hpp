#pragma once

#include "qdhom/cascade/coherence.hpp"
#include "qdhom/cascade/params.hpp"
#include "qdhom/fit/grid_fit.hpp"
#include "qdhom/hom/pipeline.hpp"
#include "qdhom/io/ini.hpp"
#include "qdhom/simd/kernels.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qdhom::io {

enum class LineSelection { both, biexciton, exciton };

// Every setting of a run. Defaults mirror the documented model defaults; the
// complete resolved set is echoed into each output's provenance.
struct RunConfig {
    // [model]
    double t1_b_ps = 140.40;
    double t1_x_ps = 227.2;
    double deph_b_per_ps = 0.0;
    double deph_x_per_ps = 0.0;
    std::optional<double> t2_b_ps;  // with t2_x_ps, replaces the deph_* rates
    std::optional<double> t2_x_ps;
    cascade::InitialState initial_state = cascade::InitialState::biexciton_prepared;
    cascade::PulseDrive pulse{};
    std::optional<double> temperature_k;  // metadata only

    // [sensor]
    cascade::CoherenceSource coherence_source = cascade::CoherenceSource::sensor;
    double epsilon_rel = 0.01;
    double width_rel = 100.0;

    // [grid]
    double window_ps = 0.0;  // 0: 10 max(T1)
    std::size_t points = 2000;
    double integrator_step_ps = 0.0;  // 0: automatic
    double max_local_error = 1e-9;

    // [irf]
    hom::Irf irf{};

    // [pattern]
    double delay_ps = 3000.0;
    double bin_ps = 16.0;
    int half_width_bins = 70;
    double p_inf = 0.5;
    double max_truncation = 0.01;
    fit::Normalization normalization = fit::Normalization::area;

    // [simulate]
    LineSelection lines = LineSelection::both;
    double central_counts = 0.0;  // 0: noiseless patterns
    std::uint64_t seed = 1;

    // [fit]
    fit::FitGrid grid{};
    fit::Objective objective = fit::Objective::shape_chi2;
    double chi2_half_range_ps = 1000.0;
    double search_half_width_ps = 750.0;
    std::string cache_dir;  // empty: in-memory only
    unsigned threads = 0;

    // [purity]
    std::size_t purity_n = 2048;
    double purity_window_factor = 10.0;
    std::vector<double> purity_ratios{0.2, 0.5, 1.0, 2.0, 5.0};  // gamma_b / gamma_x
    std::vector<std::size_t> purity_refine{256, 512, 1024, 2048};

    // [analysis]
    double rep_period_ps = 12500.0;

    // [io]
    std::string manifest;

    // [runtime]
    std::string isa = "auto";

    // Physical and structural checks across sections. Throws ValidationError.
    void validate() const;

    cascade::QDParams qd_params() const;  // resolves T2 targets into rates
    hom::SimulationOptions simulation_options() const;
    fit::FitOptions fit_options() const;
};

struct ConfigSource {
    IniDocument document;
    std::filesystem::path base_dir;  // relative paths resolve here
};

// Applies a document to `cfg`. Unknown sections or keys and bad values are
// rejected with "<file>:<line>:" messages.
void apply_ini(RunConfig& cfg, const ConfigSource& src);

// "section.key=value" overrides from the command line.
void apply_override(RunConfig& cfg, const std::string& assignment,
                    const std::filesystem::path& base_dir);

// Reads an INI config, or the "config" text embedded in a JSON provenance sidecar.
RunConfig load_config(const std::filesystem::path& path);

// Canonical text with every key, in schema order. Paths are written as given
// (absolute after loading).
std::string to_ini(const RunConfig& cfg);

// Documentation helper: section, key, description for every schema entry.
struct KeyDoc {
    std::string section;
    std::string key;
    std::string help;
};
std::vector<KeyDoc> config_keys();

}  // namespace qdhom::io
