#pragma once

#include "qdhom/io/csv.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qdhom::io {

// What a result depends on: the command, the complete resolved configuration
// and the kernel ISA, plus content hashes of every input file. Output paths
// and wall-clock times are deliberately absent so reruns compare byte for byte.
struct Provenance {
    std::string command;
    std::string config;  // canonical to_ini() text
    std::string isa;
    std::vector<std::filesystem::path> inputs;
};

std::string config_hash(const std::string& config_text);
nlohmann::json to_json(const Provenance& p);

// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Writes <stem>.csv and the sidecar <stem>.json holding the provenance block,
// the column names and `metadata`.
void write_table(const std::filesystem::path& dir, const std::string& stem, const CsvTable& table,
                 const Provenance& prov, nlohmann::json metadata = nlohmann::json::object());

}  // namespace qdhom::io
