#include "qdhom/io/provenance.hpp"

#include "qdhom/hash.hpp"
#include "qdhom/io/ini.hpp"

namespace qdhom::io {

std::string config_hash(const std::string& config_text) { return hex64(fnv1a64(config_text)); }

nlohmann::json to_json(const Provenance& p) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& path : p.inputs) {
        inputs.push_back({{"path", path.string()}, {"fnv1a64", hex64(fnv1a64(read_text_file(path)))}});
    }
    return {{"tool", "qdhom"},
            {"version", QDHOM_VERSION},
            {"command", p.command},
            {"isa", p.isa},
            {"config_hash", config_hash(p.config)},
            {"inputs", std::move(inputs)},
            {"config", p.config}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_table(const std::filesystem::path& dir, const std::string& stem, const CsvTable& table,
                 const Provenance& prov, nlohmann::json metadata) {
    write_csv(dir / (stem + ".csv"), table);
    nlohmann::json j{{"file", stem + ".csv"},
                     {"columns", table.columns},
                     {"metadata", std::move(metadata)},
                     {"provenance", to_json(prov)}};
    write_json(dir / (stem + ".json"), j);
}

}  // namespace qdhom::io
