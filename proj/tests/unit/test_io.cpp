#include "warnings.hpp"
#include "qdhom/error.hpp"
#include "qdhom/io/config.hpp"
#include "qdhom/io/csv.hpp"
#include "qdhom/io/ini.hpp"
#include "qdhom/io/manifest.hpp"
#include "qdhom/io/provenance.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

using namespace qdhom;
using namespace qdhom::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        const auto p = path / name;
        std::ofstream(p) << text;
        return p;
    }
};

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

RunConfig from_text(const std::string& text, const fs::path& base = "/data") {
    RunConfig cfg;
    apply_ini(cfg, {parse_ini(text, "test.ini"), base});
    return cfg;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("INI syntax") {
    const auto doc = parse_ini("top = 1\n# comment\n[model]\n  t1_b_ps = 150 # trailing\n; other\n[fit]\nthreads=2\n",
                               "a.ini");
    REQUIRE(doc.sections.size() == 3);
    CHECK(doc.sections[0].entries[0].key == "top");
    CHECK(doc.sections[1].name == "model");
    CHECK(doc.sections[1].entries[0].value == "150");
    CHECK(doc.sections[1].entries[0].line == 4);
    CHECK(doc.sections[2].entries[0].value == "2");

    CHECK(error_of([] { parse_ini("[model\n", "a.ini"); }) == "a.ini:1: section header is missing ']'");
    CHECK(error_of([] { parse_ini("[model]\nno equals\n", "a.ini"); }).rfind("a.ini:2:", 0) == 0);
    CHECK(error_of([] { parse_ini("[m]\nk=1\nk=2\n", "a.ini"); }).find("repeated") != std::string::npos);
    CHECK_THROWS_AS(parse_ini("[bad name]\n", "a.ini"), ValidationError);
}

TEST_CASE("config keys and values") {
    const auto cfg = from_text("[model]\nt1_b_ps = 150\n[irf]\nshape = delta\n[fit]\nt2b_step_ps = 5\ncache_dir = cache\n[purity]\nratios = 0.5, 2\n");
    CHECK(cfg.t1_b_ps == 150.0);
    CHECK(cfg.irf.shape == hom::IrfShape::delta);
    CHECK(cfg.grid.t2b.step == 5.0);
    CHECK(fs::path(cfg.cache_dir) == fs::path("/data/cache"));
    CHECK(cfg.purity_ratios == std::vector<double>{0.5, 2.0});

    CHECK(error_of([] { from_text("[model]\nt1_b_ps = 150\nbogus = 1\n"); }).rfind("test.ini:3:", 0) == 0);
    CHECK(error_of([] { from_text("[nosuch]\nx = 1\n"); }).rfind("test.ini:1:", 0) == 0);
    CHECK(error_of([] { from_text("\n[model]\nt1_b_ps = -3\n"); }) == "test.ini:3: model.t1_b_ps must be positive");
    CHECK(error_of([] { from_text("[model]\nt1_b_ps = abc\n"); }).rfind("test.ini:2:", 0) == 0);
    CHECK(error_of([] { from_text("[irf]\nshape = box\n"); }).rfind("test.ini:2:", 0) == 0);
}

TEST_CASE("command-line overrides") {
    RunConfig cfg;
    apply_override(cfg, "sensor.width_rel=10", "/x");
    CHECK(cfg.width_rel == 10.0);
    apply_override(cfg, "model.t2_b_ps=none", "/x");
    CHECK_FALSE(cfg.t2_b_ps.has_value());
    CHECK_THROWS_AS(apply_override(cfg, "width_rel=10", "/x"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "sensor.width_rel", "/x"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "sensor.nope=1", "/x"), ValidationError);
}

TEST_CASE("cross-section validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.t2_b_ps = 120.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.t2_x_ps = 240.0;
    CHECK_NOTHROW(cfg.validate());
    const auto p = cfg.qd_params();
    CHECK(1.0 / (0.5 * (p.gamma_b + p.gamma_x) + p.deph_b + p.deph_x) == doctest::Approx(120.0));
    cfg.deph_b_per_ps = 0.001;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    RunConfig overlap;
    overlap.delay_ps = 1000.0;
    CHECK_THROWS_AS(overlap.validate(), ValidationError);
}

TEST_CASE("canonical text round trip") {
    RunConfig cfg;
    cfg.t1_b_ps = 141.11;
    cfg.irf = hom::Irf::delta();
    cfg.purity_ratios = {0.25, 4.0};
    cfg.t2_b_ps = 120.0;
    cfg.t2_x_ps = 240.0;
    cfg.cache_dir = "/tmp/c";
    const std::string text = to_ini(cfg);
    const RunConfig back = from_text(text);
    CHECK(to_ini(back) == text);
    CHECK(back.t1_b_ps == 141.11);
    CHECK(back.t2_x_ps == 240.0);

    // Every documented key appears in the canonical text.
    for (const auto& k : config_keys()) CHECK(text.find("\n" + k.key + " = ") != std::string::npos);
}

TEST_CASE("configs load from INI files and provenance sidecars") {
    TempDir dir("qdhom_io_config");
    const auto ini = dir.write("run.ini", "[model]\nt1_b_ps = 150\n[io]\nmanifest = data/m.ini\n");
    const RunConfig a = load_config(ini);
    CHECK(a.t1_b_ps == 150.0);
    CHECK(fs::path(a.manifest) == (dir.path / "data/m.ini").lexically_normal());

    Provenance prov{"simulate", to_ini(a), "scalar", {}};
    write_json(dir.path / "out.json", nlohmann::json{{"provenance", to_json(prov)}});
    const RunConfig b = load_config(dir.path / "out.json");
    CHECK(to_ini(b) == to_ini(a));

    dir.write("bad.json", "{\"x\": 1}");
    CHECK_THROWS_AS(load_config(dir.path / "bad.json"), ValidationError);
    CHECK_THROWS_AS(load_config(dir.path / "missing.ini"), IoError);
}

TEST_CASE("provenance content") {
    TempDir dir("qdhom_io_prov");
    const auto input = dir.write("h.csv", "time_ps,counts\n0,1\n16,2\n");
    Provenance p{"fit", "[model]\nt1_b_ps = 1\n", "avx2", {input}};
    const auto j = to_json(p);
    CHECK(j["command"] == "fit");
    CHECK(j["isa"] == "avx2");
    CHECK(j["config_hash"] == config_hash(p.config));
    REQUIRE(j["inputs"].size() == 1);
    CHECK(j["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);
    Provenance q = p;
    q.config += "#";
    CHECK(config_hash(q.config) != config_hash(p.config));
}

TEST_CASE("histogram CSV") {
    analysis::Histogram h;
    h.bin_width = 16.0;
    h.origin = -32.0;
    h.counts = {0.0, 1.5, 1e-17, 3.0};
    TempDir dir("qdhom_io_csv");
    write_histogram_csv(dir.path / "h.csv", h);
    const auto back = read_histogram_csv(dir.path / "h.csv");
    CHECK(back.counts == h.counts);
    CHECK(back.origin == h.origin);
    CHECK(back.bin_width == h.bin_width);

    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

    CHECK(error_of([] { parse_histogram_csv("time,counts\n", "x.csv"); }).rfind("x.csv: row 1", 0) == 0);
    CHECK(error_of([] { parse_histogram_csv("time_ps,counts\n0,1\n16,abc\n", "x.csv"); })
              .rfind("x.csv: row 3, column 2", 0) == 0);
    CHECK(error_of([] { parse_histogram_csv("time_ps,counts\n0,1\n16,2,3\n", "x.csv"); })
              .rfind("x.csv: row 3, column 3", 0) == 0);
    CHECK(error_of([] { parse_histogram_csv("time_ps,counts\n0,1\n16,-2\n", "x.csv"); })
              .find("nonnegative") != std::string::npos);
    CHECK(error_of([] { parse_histogram_csv("time_ps,counts\n0,1\n16,2\n40,2\n", "x.csv"); })
              .rfind("x.csv: row 4, column 1", 0) == 0);
    CHECK_THROWS_AS(read_histogram_csv(dir.path / "none.csv"), IoError);
}

TEST_CASE("dataset manifest") {
    TempDir dir("qdhom_io_manifest");
    fs::create_directories(dir.path / "d");
    dir.write("d/hb.csv", "time_ps,counts\n0,1\n16,2\n");
    dir.write("d/hx.csv", "time_ps,counts\n0,3\n16,4\n");

    SUBCASE("relative paths resolve against the manifest") {
        const auto m = read_manifest(dir.write(
            "m.ini", "[entry]\ntemperature_k = 4.8\nt1_b_ps = 141.11\nhom_biexciton = d/hb.csv\nhom_exciton = d/hx.csv\n"
                     "[entry]\ntemperature_k = 10\nhom_exciton = d/hx.csv\n"));
        REQUIRE(m.entries.size() == 2);
        CHECK(m.entries[0].t1_b_ps == 141.11);
        REQUIRE(m.entries[0].hom(cascade::Line::biexciton));
        CHECK(m.entries[0].hom(cascade::Line::biexciton)->data.counts[1] == 2.0);
        CHECK_FALSE(m.entries[1].hom(cascade::Line::biexciton));
        CHECK(m.entries[1].hom(cascade::Line::exciton)->data.counts[0] == 3.0);
    }
    SUBCASE("empty manifest") {
        CHECK(error_of([&] { read_manifest(dir.write("e.ini", "# nothing\n")); })
                  .find("no [entry] sections") != std::string::npos);
        CHECK_THROWS_AS(read_manifest(dir.path / "e.ini"), ValidationError);
    }
    SUBCASE("missing data file") {
        CHECK_THROWS_AS(read_manifest(dir.write("m.ini", "[entry]\ntemperature_k = 4\nhom_exciton = d/none.csv\n")),
                        IoError);
    }
    SUBCASE("unknown key and missing temperature") {
        CHECK(error_of([&] { read_manifest(dir.write("m.ini", "[entry]\ntemperature_k = 4\ncolour = red\n")); })
                  .find("m.ini:3:") != std::string::npos);
        CHECK_THROWS_AS(read_manifest(dir.write("n.ini", "[entry]\nhom_exciton = d/hx.csv\n")), ValidationError);
    }
    SUBCASE("temperature order warning") {
        test_support::WarningCapture w;
        read_manifest(dir.write("m.ini", "[entry]\ntemperature_k = 10\n[entry]\ntemperature_k = 5\n"));
        CHECK_FALSE(w.messages.empty());
    }
}

}  // TEST_SUITE
