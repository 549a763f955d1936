#include "qdhom/fit/template_cache.hpp"

#include "qdhom/error.hpp"
#include "qdhom/hash.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace qdhom::fit {

std::string TemplateSpec::key() const {
    const auto& s = sim;
    std::ostringstream k;
    k << "qdhom-template/" << QDHOM_VERSION << ';' << cascade::to_string(line) << ';'
      << exact_double(params.gamma_b) << ';' << exact_double(params.gamma_x) << ';'
      << exact_double(params.deph_b) << ';' << exact_double(params.deph_x) << ';'
      << static_cast<int>(params.initial_state) << ';' << exact_double(params.pulse.area) << ';'
      << exact_double(params.pulse.fwhm_ps) << ';' << cascade::to_string(s.line.source) << ';'
      << exact_double(s.line.eps_rel) << ';' << exact_double(s.line.width_rel) << ';'
      << exact_double(s.line.integrator.step) << ';'
      << exact_double(s.line.integrator.max_local_error) << ';' << exact_double(s.window_ps)
      << ';' << s.points << ';' << hom::to_string(s.irf.shape) << ';'
      << exact_double(s.irf.fwhm_ps) << ';' << exact_double(s.pattern.delay_ps) << ';'
      << exact_double(s.pattern.bin_ps) << ';' << exact_double(s.pattern.max_truncation) << ';'
      << s.half_width_bins << ';' << exact_double(s.p_inf);
    return k.str();
}

TemplateCache::TemplateCache(std::filesystem::path directory) : dir_(std::move(directory)) {
    if (dir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create template cache directory " + dir_.string() + ": " +
                          ec.message());
}

std::shared_ptr<const Template> TemplateCache::get(const TemplateSpec& spec) {
    const std::string key = spec.key();
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) {
            ++memory_hits_;
            return it->second;
        }
    }
    if (auto loaded = load(key)) {
        std::lock_guard lock(mutex_);
        ++disk_hits_;
        return entries_.emplace(key, loaded).first->second;
    }
    const hom::HomResult r = hom::simulate_hom(spec.params, spec.line, spec.sim);
    auto t = std::make_shared<Template>(Template{r.pattern, r.p0});
    store(key, *t);
    std::lock_guard lock(mutex_);
    ++computed_;
    return entries_.emplace(key, std::move(t)).first->second;
}

std::shared_ptr<const Template> TemplateCache::load(const std::string& key) const {
    if (dir_.empty()) return nullptr;
    const auto path = dir_ / (hex64(fnv1a64(key)) + ".json");
    std::ifstream in(path);
    if (!in) return nullptr;
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("key").get<std::string>() != key) return nullptr;
        auto t = std::make_shared<Template>();
        t->pattern.bin_width = j.at("bin_width").get<double>();
        t->pattern.origin = j.at("origin").get<double>();
        t->pattern.counts = j.at("counts").get<std::vector<double>>();
        t->p0 = j.at("p0").get<double>();
        return t;
    } catch (const nlohmann::json::exception&) {
        // A damaged entry is recomputed and overwritten.
        return nullptr;
    }
}

void TemplateCache::store(const std::string& key, const Template& t) const {
    if (dir_.empty()) return;
    nlohmann::json j;
    j["key"] = key;
    j["bin_width"] = t.pattern.bin_width;
    j["origin"] = t.pattern.origin;
    j["counts"] = t.pattern.counts;
    j["p0"] = t.p0;
    const auto path = dir_ / (hex64(fnv1a64(key)) + ".json");
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write template cache entry " + tmp);
        out << j.dump();
        if (!out) throw IoError("failed writing template cache entry " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot finalize template cache entry " + path.string());
}

std::size_t TemplateCache::computed() const {
    std::lock_guard lock(mutex_);
    return computed_;
}

std::size_t TemplateCache::memory_hits() const {
    std::lock_guard lock(mutex_);
    return memory_hits_;
}

std::size_t TemplateCache::disk_hits() const {
    std::lock_guard lock(mutex_);
    return disk_hits_;
}

}  // namespace qdhom::fit
