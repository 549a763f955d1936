#pragma once

#include "qdhom/analysis/histogram.hpp"
#include "qdhom/cascade/params.hpp"
#include "qdhom/hom/pipeline.hpp"

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

namespace qdhom::fit {

// Everything a simulated pattern depends on.
struct TemplateSpec {
    cascade::QDParams params;
    cascade::Line line = cascade::Line::exciton;
    hom::SimulationOptions sim;

    // Exact parameter tuple; doubles are spelled in hex so distinct values never collide.
    std::string key() const;
};

struct Template {
    analysis::Histogram pattern;  // bins centred on multiples of the bin width
    double p0 = 0.0;
};

// Memoizes simulated patterns. With a directory, entries are also stored as
// JSON files named by the key hash and reloaded bit-exactly by later runs.
// Safe to share between threads.
class TemplateCache {
public:
    TemplateCache() = default;
    explicit TemplateCache(std::filesystem::path directory);

    std::shared_ptr<const Template> get(const TemplateSpec& spec);

    std::size_t computed() const;
    std::size_t memory_hits() const;
    std::size_t disk_hits() const;

private:
    std::shared_ptr<const Template> load(const std::string& key) const;
    void store(const std::string& key, const Template& t) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const Template>> entries_;
    std::size_t computed_ = 0;
    std::size_t memory_hits_ = 0;
    std::size_t disk_hits_ = 0;
};

}  // namespace qdhom::fit
