#include "qdhom/error.hpp"
#include "qdhom/io/commands.hpp"
#include "qdhom/io/config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    std::string manifest;
    std::string isa;
    long long seed = -1;
    long long threads = -1;
};

int run(const std::string& command, const Options& o) {
    qdhom::io::RunConfig cfg;
    if (!o.config.empty()) cfg = qdhom::io::load_config(o.config);
    const fs::path cwd = fs::current_path();
    for (const auto& s : o.overrides) qdhom::io::apply_override(cfg, s, cwd);
    if (!o.manifest.empty()) qdhom::io::apply_override(cfg, "io.manifest=" + o.manifest, cwd);
    if (!o.isa.empty()) qdhom::io::apply_override(cfg, "runtime.isa=" + o.isa, cwd);
    if (o.seed >= 0) qdhom::io::apply_override(cfg, "simulate.seed=" + std::to_string(o.seed), cwd);
    if (o.threads >= 0) {
        qdhom::io::apply_override(cfg, "fit.threads=" + std::to_string(o.threads), cwd);
    }
    const auto result = qdhom::io::run_command(command, std::move(cfg), o.out);
    std::cout << result.summary;
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cascade HOM simulation, histogram analysis and coherence-time fitting"};
    app.require_subcommand(0, 1);
    bool list_keys = false;
    bool print_defaults = false;
    app.add_flag("--list-keys", list_keys, "List every configuration key and exit");
    app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

    Options o;
    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "Simulate HOM curves and three-peak patterns for one parameter set"},
        {"fit", "Grid-fit (T2b, T2x) for every manifest entry"},
        {"analyze", "P0, visibility, lifetimes and g2(0) from manifest histograms"},
        {"purity", "Reduced-state purity of the cascade wavefunction"},
        {"sweep", "Analyze and fit a temperature series"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", o.config, "INI config, or a JSON output whose provenance to rerun")
            ->check(CLI::ExistingFile);
        sub->add_option("-o,--out", o.out, "Output directory")->required();
        sub->add_option("-s,--set", o.overrides, "Override a key: section.key=value (repeatable)");
        sub->add_option("--manifest", o.manifest, "Dataset manifest (io.manifest)");
        sub->add_option("--isa", o.isa, "Kernel ISA: auto, scalar or avx2 (runtime.isa)");
        sub->add_option("--seed", o.seed, "Noise seed (simulate.seed)")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", o.threads, "Fit worker threads (fit.threads)")
            ->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (list_keys) {
            for (const auto& k : qdhom::io::config_keys()) {
                std::cout << k.section << '.' << k.key << "  " << k.help << '\n';
            }
            return 0;
        }
        if (print_defaults) {
            std::cout << qdhom::io::to_ini(qdhom::io::RunConfig{});
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 1;
        }
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const qdhom::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const qdhom::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const qdhom::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
