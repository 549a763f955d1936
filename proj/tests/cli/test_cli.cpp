// Drives the qdhom executable end to end. Each case works in its own scratch
// directory under the build tree.

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "qdhom/analysis/histogram.hpp"
#include "qdhom/hom/pipeline.hpp"
#include "qdhom/io/csv.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fs = std::filesystem;
namespace os = oracle_support;
using qdhom::analysis::Histogram;
using namespace cli_runner;

namespace {

Histogram histogram_from(const std::vector<double>& counts, double bin, double origin) {
    Histogram h;
    h.bin_width = bin;
    h.origin = origin;
    h.counts = counts;
    return h;
}

const char* kFast = "--set sensor.coherence_source=direct --set grid.points=800 ";

}  // namespace

TEST_CASE("help, key listing and defaults") {
    Scratch s("help");
    CHECK(cli(s, "--help").code == 0);
    const auto keys = cli(s, "--list-keys");
    CHECK(keys.code == 0);
    CHECK(keys.out.find("model.t1_b_ps") != std::string::npos);
    CHECK(keys.out.find("fit.cache_dir") != std::string::npos);
    const auto defaults = cli(s, "--print-defaults");
    CHECK(defaults.code == 0);
    s.write("defaults.ini", defaults.out);
    CHECK(cli(s, "purity -c defaults.ini -o p --set purity.n=256 --set purity.refine=128,256 "
                   "--set purity.ratios=1")
              .code == 0);
    CHECK(cli(s, "simulate").code == 1);
    CHECK(cli(s, "bogus -o x").code == 1);
}

TEST_CASE("simulate is deterministic and reruns from provenance") {
    Scratch s("determinism");
    const std::string args = std::string(kFast) + "--set simulate.central_counts=10000 --seed 7 ";
    REQUIRE(cli(s, "simulate -o a " + args).code == 0);
    REQUIRE(cli(s, "simulate -o b " + args).code == 0);
    const auto a = tree(s / "a");
    CHECK(a.size() >= 10);
    CHECK(a == tree(s / "b"));

    for (const char* sidecar : {"a/result.json", "a/pattern_exciton.json", "a/summary.json"}) {
        CAPTURE(sidecar);
        const auto j = nlohmann::json::parse(slurp(s / sidecar));
        const auto& prov = j.contains("provenance") ? j["provenance"] : j;
        CHECK(prov["command"] == "simulate");
        CHECK(prov["config_hash"].get<std::string>().size() == 16);
        CHECK(prov["config"].get<std::string>().find("seed = 7") != std::string::npos);
    }
    REQUIRE(cli(s, "simulate -c a/result.json -o c").code == 0);
    CHECK(tree(s / "c") == a);

    REQUIRE(cli(s, "simulate -o d " + std::string(kFast) + "--set simulate.central_counts=10000 --seed 8").code == 0);
    CHECK(slurp(s / "d/pattern_exciton_noisy.csv") != slurp(s / "a/pattern_exciton_noisy.csv"));
    CHECK(slurp(s / "d/pattern_exciton.csv") == slurp(s / "a/pattern_exciton.csv"));
}

TEST_CASE("simulate emits the zero-dephasing anchor") {
    Scratch s("anchor");
    REQUIRE(cli(s, "simulate -o out --set irf.shape=delta").code == 0);
    const auto rows = read_csv(s / "out/summary.csv");
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CAPTURE(r.at("line"));
        CHECK(std::abs(number(r, "p0") - 0.5 * (1.0 - 227.2 / 367.6)) < 0.005);
        CHECK(number(r, "visibility") >= 0.0);
        CHECK(number(r, "visibility") <= 1.0);
    }
}

TEST_CASE("exit codes and fail-fast validation") {
    Scratch s("errors");
    s.write("bad.ini", "[model]\nt1_b_ps = -1\n");
    auto r = cli(s, "simulate -c bad.ini -o out");
    CHECK(r.code == 1);
    CHECK(r.err.find("bad.ini:2:") != std::string::npos);
    CHECK_FALSE(fs::exists(s / "out"));

    r = cli(s, "simulate -o out --set model.colour=red");
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(s / "out"));

    r = cli(s, "simulate -o out --set grid.max_local_error=1e-30 --set grid.points=100");
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(s / "out"));

    s.write("empty.ini", "# no entries\n");
    r = cli(s, "fit -o out --manifest empty.ini");
    CHECK(r.code == 1);
    CHECK(r.err.find("no [entry]") != std::string::npos);
    CHECK_FALSE(fs::exists(s / "out"));

    r = cli(s, "analyze -o out --manifest missing.ini");
    CHECK(r.code == 3);
    CHECK_FALSE(fs::exists(s / "out"));

    s.write("m.ini", "[entry]\ntemperature_k = 4.8\nhom_exciton = h.csv\n");
    s.write("h.csv", "time_ps,counts\n0,1\n16,x\n");
    r = cli(s, "analyze -o out --manifest m.ini");
    CHECK(r.code == 1);
    CHECK(r.err.find("row 3, column 2") != std::string::npos);
    CHECK_FALSE(fs::exists(s / "out"));
}

TEST_CASE("analyze reproduces planted quantities") {
    Scratch s("analyze");
    REQUIRE(cli(s, "simulate -o sim " + std::string(kFast)).code == 0);
    const auto sim = read_csv(s / "sim/summary.csv");

    // Distinguishable and fully suppressed patterns.
    const auto side = qdhom::io::read_histogram_csv(s / "sim/pattern_exciton.csv");
    Histogram zero_central = side;
    const auto c0 = *side.bin_at(0.0);
    for (std::size_t i = c0 - 90; i <= c0 + 90; ++i) zero_central.counts[i] = 0.0;
    Histogram flat = side;
    for (std::size_t i = c0 - 90; i <= c0 + 90; ++i) flat.counts[i] = 0.5 * (side.counts[i - 188] + side.counts[i + 188]);
    qdhom::io::write_histogram_csv(s / "zero.csv", zero_central);
    qdhom::io::write_histogram_csv(s / "flat.csv", flat);

    const double bin = 4.0;
    qdhom::io::write_histogram_csv(
        s / "decay_b.csv", histogram_from(os::decay_histogram(141.11, 200.0, 0.0, 1e5, 2.0, bin, 800), bin, 0.0));
    qdhom::io::write_histogram_csv(
        s / "decay_x.csv", histogram_from(os::decay_histogram(227.2, 200.0, 0.0, 1e5, 2.0, bin, 900), bin, 0.0));
    const double period = 12500.0, g2bin = 20.0, origin = -6.0 * period;
    const auto bins = static_cast<std::size_t>(12.0 * period / g2bin) + 1;
    qdhom::io::write_histogram_csv(
        s / "g2.csv", histogram_from(os::pulsed_autocorrelation(0.0076, 300.0, period, 6, g2bin, origin, bins),
                                     g2bin, origin));

    s.write("m.ini",
            "[entry]\ntemperature_k = 4.8\nhom_biexciton = sim/pattern_biexciton.csv\n"
            "hom_exciton = sim/pattern_exciton.csv\n"
            "decay_biexciton = decay_b.csv\ndecay_exciton = decay_x.csv\nautocorrelation_biexciton = g2.csv\n"
            "[entry]\ntemperature_k = 10\nhom_biexciton = zero.csv\nhom_exciton = flat.csv\n");
    const auto r = cli(s, "analyze -o out --manifest m.ini --set irf.shape=delta");
    REQUIRE(r.code == 0);
    const auto rows = read_csv(s / "out/analysis.csv");
    REQUIRE(rows.size() == 4);

    CHECK(number(rows[0], "p0") == doctest::Approx(number(sim[0], "p0")).epsilon(1e-9));
    CHECK(number(rows[1], "p0") == doctest::Approx(number(sim[1], "p0")).epsilon(1e-9));
    CHECK(std::abs(number(rows[0], "t1_ps") - 141.11) < 0.01);
    CHECK(std::abs(number(rows[1], "t1_ps") - 227.2) < 0.01);
    CHECK(number(rows[0], "g2_zero") == doctest::Approx(0.0076).epsilon(1e-6));
    CHECK(rows[1].at("g2_zero").empty());
    CHECK(number(rows[2], "visibility") == 1.0);
    CHECK(std::abs(number(rows[3], "visibility")) < 1e-6);

    const auto meta = nlohmann::json::parse(slurp(s / "out/analysis.json"));
    CHECK(meta["provenance"]["inputs"].size() == 8);
}

TEST_CASE("fit recovers planted coherence times and reuses cached templates") {
    Scratch s("fit");
    const std::string common = std::string(kFast) +
                               "--set fit.t2b_min_ps=100 --set fit.t2b_max_ps=140 "
                               "--set fit.t2x_min_ps=220 --set fit.t2x_max_ps=260 ";
    REQUIRE(cli(s, "simulate -o sim " + common + "--set model.t2_b_ps=120 --set model.t2_x_ps=240")
                .code == 0);
    s.write("m.ini",
            "[entry]\ntemperature_k = 4.8\nt1_b_ps = 140.40\nt1_x_ps = 227.2\n"
            "hom_biexciton = sim/pattern_biexciton.csv\nhom_exciton = sim/pattern_exciton.csv\n");

    const auto cold = cli(s, "fit -o a --manifest m.ini --set fit.cache_dir=cache " + common);
    REQUIRE(cold.code == 0);
    CHECK(cold.out.find("0 disk hits") != std::string::npos);
    const auto warm = cli(s, "fit -o b --manifest m.ini --set fit.cache_dir=cache " + common);
    REQUIRE(warm.code == 0);
    CHECK(warm.out.find("0 computed") != std::string::npos);
    CHECK(slurp(s / "a/fit_results.csv") == slurp(s / "b/fit_results.csv"));
    CHECK(slurp(s / "a/fit_nodes.csv") == slurp(s / "b/fit_nodes.csv"));
    MESSAGE("cold " << cold.seconds << " s, warm " << warm.seconds << " s");
    CHECK(cold.seconds >= 5.0 * warm.seconds);

    const auto rows = read_csv(s / "a/fit_results.csv");
    REQUIRE(rows.size() == 1);
    CHECK(number(rows[0], "t2_b_ps") == 120.0);
    CHECK(number(rows[0], "t2_x_ps") == 240.0);
    CHECK(number(rows[0], "t2_b_uncertainty_ps") == 10.0);
    CHECK(number(rows[0], "feasible_nodes") + number(rows[0], "infeasible_nodes") == 25.0);
    CHECK(number(rows[0], "t2_star_x_ps") == doctest::Approx(os::dephasing_time(240.0, 227.2)));

    // The sweep over the same manifest agrees with the fit.
    REQUIRE(cli(s, "sweep -o c --manifest m.ini --set fit.cache_dir=cache " + common).code == 0);
    const auto sweep = read_csv(s / "c/sweep.csv");
    REQUIRE(sweep.size() == 1);
    CHECK(number(sweep[0], "t2_b_ps") == 120.0);
    const auto summary = read_csv(s / "c/sweep_summary.csv");
    REQUIRE(summary.size() == 4);
    for (const auto& r : summary) CHECK(number(r, "change_pct") == 0.0);
}

TEST_CASE("fit without lifetimes fails before writing") {
    Scratch s("fit_missing");
    REQUIRE(cli(s, "simulate -o sim " + std::string(kFast)).code == 0);
    s.write("m.ini", "[entry]\ntemperature_k = 4.8\nhom_exciton = sim/pattern_exciton.csv\n");
    const auto r = cli(s, "fit -o out --manifest m.ini");
    CHECK(r.code == 1);
    CHECK(r.err.find("lifetime") != std::string::npos);
    CHECK_FALSE(fs::exists(s / "out"));
}

TEST_CASE("purity command") {
    Scratch s("purity");
    REQUIRE(cli(s, "purity -o out --set purity.n=1024 --set purity.ratios=1,0.2,5 "
                     "--set purity.refine=128,256,512,1024")
                .code == 0);
    const auto rows = read_csv(s / "out/purity.csv");
    REQUIRE(rows.size() == 4);
    CHECK(std::abs(number(rows[0], "purity_x") - 0.6180) < 1e-3);
    CHECK(std::abs(number(rows[1], "purity_x") - 0.5) < 1e-3);
    for (const auto& r : rows) CHECK(number(r, "abs_error") < 1e-3);
    const auto conv = read_csv(s / "out/purity_convergence.csv");
    REQUIRE(conv.size() == 4);
    for (std::size_t i = 1; i < conv.size(); ++i) CHECK(number(conv[i], "abs_error") < number(conv[i - 1], "abs_error"));
    CHECK(cli(s, "purity -o bad --set model.t1_b_ps=0").code == 1);
}
