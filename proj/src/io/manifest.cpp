#include "qdhom/io/manifest.hpp"

#include "qdhom/error.hpp"
#include "qdhom/io/csv.hpp"
#include "qdhom/io/ini.hpp"
#include "qdhom/log.hpp"

namespace qdhom::io {

namespace fs = std::filesystem;

const std::optional<HistogramFile>& ManifestEntry::hom(cascade::Line l) const {
    return l == cascade::Line::biexciton ? hom_b : hom_x;
}

const std::optional<HistogramFile>& ManifestEntry::decay(cascade::Line l) const {
    return l == cascade::Line::biexciton ? decay_b : decay_x;
}

const std::optional<HistogramFile>& ManifestEntry::autocorrelation(cascade::Line l) const {
    return l == cascade::Line::biexciton ? autocorrelation_b : autocorrelation_x;
}

DatasetManifest parse_manifest(std::string_view text, const fs::path& path) {
    const IniDocument doc = parse_ini(text, path.string());
    const fs::path base = fs::absolute(path).parent_path();

    DatasetManifest m;
    m.source = fs::absolute(path).lexically_normal();
    for (const auto& sec : doc.sections) {
        auto where = [&](int line) { return doc.source + ":" + std::to_string(line) + ": "; };
        if (sec.name.empty()) {
            if (!sec.entries.empty()) {
                throw ValidationError(where(sec.entries.front().line) +
                                      "key outside of an [entry] section");
            }
            continue;
        }
        if (sec.name != "entry") {
            throw ValidationError(where(sec.line) + "unknown section [" + sec.name +
                                  "], expected [entry]");
        }
        ManifestEntry e;
        e.line = sec.line;
        bool has_temperature = false;
        for (const auto& kv : sec.entries) {
            auto file = [&](std::optional<HistogramFile>& slot) {
                fs::path p(kv.value);
                if (p.is_relative()) p = base / p;
                p = p.lexically_normal();
                if (!fs::exists(p)) {
                    throw IoError(where(kv.line) + kv.key + ": file not found: " + p.string());
                }
                slot = HistogramFile{p, read_histogram_csv(p)};
            };
            try {
                if (kv.key == "temperature_k") {
                    e.temperature_k = parse_double(kv.value, kv.key);
                    has_temperature = true;
                } else if (kv.key == "t1_b_ps") {
                    e.t1_b_ps = parse_double(kv.value, kv.key);
                    if (!(*e.t1_b_ps > 0.0)) throw ValidationError("t1_b_ps must be positive");
                } else if (kv.key == "t1_x_ps") {
                    e.t1_x_ps = parse_double(kv.value, kv.key);
                    if (!(*e.t1_x_ps > 0.0)) throw ValidationError("t1_x_ps must be positive");
                } else if (kv.key == "hom_biexciton") {
                    file(e.hom_b);
                } else if (kv.key == "hom_exciton") {
                    file(e.hom_x);
                } else if (kv.key == "decay_biexciton") {
                    file(e.decay_b);
                } else if (kv.key == "decay_exciton") {
                    file(e.decay_x);
                } else if (kv.key == "autocorrelation_biexciton") {
                    file(e.autocorrelation_b);
                } else if (kv.key == "autocorrelation_exciton") {
                    file(e.autocorrelation_x);
                } else {
                    throw ValidationError("unknown key '" + kv.key + "'");
                }
            } catch (const IoError&) {
                throw;
            } catch (const ValidationError& err) {
                const std::string msg = err.what();
                // CSV errors already name their file.
                if (msg.rfind(doc.source, 0) == 0) throw;
                throw ValidationError(where(kv.line) + msg);
            }
        }
        if (!has_temperature) throw ValidationError(where(sec.line) + "entry has no temperature_k");
        m.entries.push_back(std::move(e));
    }
    if (m.entries.empty()) {
        throw ValidationError(doc.source + ": manifest has no [entry] sections");
    }
    for (std::size_t i = 1; i < m.entries.size(); ++i) {
        if (!(m.entries[i].temperature_k > m.entries[i - 1].temperature_k)) {
            log::warn(doc.source + ":" + std::to_string(m.entries[i].line) +
                      ": temperatures are not strictly increasing");
            break;
        }
    }
    return m;
}

DatasetManifest read_manifest(const fs::path& path) {
    return parse_manifest(read_text_file(path), path);
}

}  // namespace qdhom::io
