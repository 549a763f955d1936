#pragma once

#include "qdhom/io/config.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qdhom::io {

struct CommandResult {
    std::vector<std::filesystem::path> files;  // in write order
    std::string summary;                       // short human-readable report
};

// Each command validates the configuration and loads every input before the
// output directory is touched, so a rejected run leaves nothing behind. The
// configured ISA is resolved and selected first; the resolved name is what
// the provenance records.
CommandResult run_simulate(RunConfig cfg, const std::filesystem::path& out_dir);
CommandResult run_fit(RunConfig cfg, const std::filesystem::path& out_dir);
CommandResult run_analyze(RunConfig cfg, const std::filesystem::path& out_dir);
CommandResult run_purity(RunConfig cfg, const std::filesystem::path& out_dir);
CommandResult run_sweep(RunConfig cfg, const std::filesystem::path& out_dir);

// Dispatch by subcommand name.
CommandResult run_command(std::string_view name, RunConfig cfg,
                          const std::filesystem::path& out_dir);

}  // namespace qdhom::io
