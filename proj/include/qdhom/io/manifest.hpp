#pragma once

#include "qdhom/analysis/histogram.hpp"
#include "qdhom/cascade/params.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qdhom::io {

struct HistogramFile {
    std::filesystem::path path;  // absolute
    analysis::Histogram data;
};

// One measurement set. Any subset of files may be given; commands check what
// they need.
struct ManifestEntry {
    double temperature_k = 0.0;
    int line = 0;  // line of the [entry] header
    std::optional<HistogramFile> hom_b, hom_x;
    std::optional<HistogramFile> decay_b, decay_x;
    std::optional<HistogramFile> autocorrelation_b, autocorrelation_x;
    std::optional<double> t1_b_ps, t1_x_ps;  // pre-fitted lifetimes

    const std::optional<HistogramFile>& hom(cascade::Line l) const;
    const std::optional<HistogramFile>& decay(cascade::Line l) const;
    const std::optional<HistogramFile>& autocorrelation(cascade::Line l) const;
};

struct DatasetManifest {
    std::filesystem::path source;
    std::vector<ManifestEntry> entries;
};

// Repeated [entry] sections of key = value pairs:
//   temperature_k, hom_biexciton, hom_exciton, decay_biexciton, decay_exciton,
//   autocorrelation_biexciton, autocorrelation_exciton, t1_b_ps, t1_x_ps.
// File paths are relative to the manifest. Every referenced file is read and
// parsed here. An empty manifest is a ValidationError; temperatures that do
// not increase produce a warning.
DatasetManifest read_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& path);

}  // namespace qdhom::io
