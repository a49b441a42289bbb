#include "nhlat/scenario.hpp"

#include "nhlat/errors.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nhlat;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag)
{
    const fs::path p = fs::temp_directory_path() / ("nhlat_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("parse_config: preset fills reference defaults")
{
    const ScenarioConfig cfg = parse_config(R"({"version": 1, "preset": "mirror_bridge"})");
    REQUIRE(cfg.preset.has_value());
    CHECK(*cfg.preset == PresetVariant::mirror_bridge);
    CHECK(cfg.params.t == 1.0);
    CHECK(cfg.params.t_a == 0.2);
    CHECK(cfg.params.t_b == 1.0);
    CHECK(cfg.params.kappa0 == 1.0);
    CHECK(cfg.params.gamma == 2.0);
    CHECK(cfg.params.system_sites == 9);
    const LatticeGraph g = build_preset(*cfg.preset, cfg.params, 1.0);
    CHECK(g.size() == 29); // 9 + 11 + 9
}

TEST_CASE("parse_config: strictness and validation")
{
    CHECK_THROWS_AS(parse_config(R"({"version": 1})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"preset": "mirror_bridge"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"version": 2, "preset": "mirror_bridge"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "preset": "nope"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"version": 1, "preset": "mirror_bridge", "bogus": 1})"),
                    config_error);
    CHECK_THROWS_AS(
        parse_config(R"({"version": 1, "preset": "mirror_bridge", "parameters": {"x": 1}})"),
        config_error);

    // gamma < 0 rejected
    CHECK_THROWS_AS(parse_config(
                        R"({"version": 1, "preset": "mirror_bridge", "parameters": {"gamma": -1}})"),
                    config_error);

    // decreasing sweep grid rejected
    CHECK_THROWS_AS(parse_config(
                        R"({"version": 1, "preset": "mirror_bridge", "grid": {"lo": 1.2, "hi": 1.0, "step": 0.01}})"),
                    config_error);

    // syntax errors carry a line/column
    try {
        parse_config("{\n  \"version\": 1,\n  oops\n}");
        FAIL("expected a syntax error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("parse_config: custom graph round trip and duplicate-edge rejection")
{
    const std::string text = R"({
      "version": 1,
      "graph": {
        "n_sites": 3,
        "first_index": 1,
        "couplings": [[1, 2, 1.0], [2, 3, 0.5]],
        "onsite_im": [0.5, -0.5, 0.0],
        "regions": ["system1", "reservoir", "system2"]
      }
    })";
    const ScenarioConfig cfg = parse_config(text);
    REQUIRE(cfg.custom_graph.has_value());
    const LatticeGraph& g = *cfg.custom_graph;
    CHECK(g.size() == 3);
    CHECK(g.coupling_amplitude(2, 3) == 0.5);
    CHECK(g.onsite(1) == std::complex<double>(0.0, 0.5));
    CHECK(g.region(2) == Region::reservoir);

    // serialization round-trips through the same parser
    const std::string out = graph_to_config_json(g);
    const ScenarioConfig cfg2 =
        parse_config(std::string(R"({"version": 1, "graph": )") + out + "}");
    REQUIRE(cfg2.custom_graph.has_value());
    CHECK(cfg2.custom_graph->coupling_amplitude(1, 2) == 1.0);
    CHECK(cfg2.custom_graph->onsite(2) == std::complex<double>(0.0, -0.5));

    CHECK_THROWS_AS(parse_config(R"({
      "version": 1,
      "graph": {"n_sites": 3, "couplings": [[1, 2, 1.0], [2, 1, 1.0]]}
    })"),
                    config_error);
}

TEST_CASE("run_scenario: spectrum on a custom graph")
{
    const fs::path out = temp_dir("spectrum");
    ScenarioConfig cfg = parse_config(R"({
      "version": 1,
      "graph": {"n_sites": 2, "couplings": [[1, 2, 1.0]]}
    })");
    CHECK(run_scenario(cfg, Action::spectrum, out) == 0);
    const std::string csv = slurp(out / "spectrum.csv");
    CHECK(csv.rfind("t_prime,branch_id,re_E,im_E\n", 0) == 0);
    CHECK(csv.find("0,0,-0.9") != std::string::npos); // E = -t row
}

TEST_CASE("run_scenario: sweep requires a preset family")
{
    ScenarioConfig cfg = parse_config(R"({
      "version": 1,
      "graph": {"n_sites": 2, "couplings": [[1, 2, 1.0]]}
    })");
    CHECK_THROWS_AS(run_scenario(cfg, Action::sweep, temp_dir("sweep_custom")), config_error);
}

TEST_CASE("run_scenario: analyze writes a mode profile and a report that round-trips")
{
    const fs::path out = temp_dir("analyze");
    ScenarioConfig cfg = parse_config(R"({
      "version": 1,
      "preset": "single_system_reservoir",
      "grid": {"lo": 1.0, "hi": 1.1, "step": 0.01}
    })");
    CHECK(run_scenario(cfg, Action::analyze, out) == 0);

    const Eigen::VectorXcd psi = read_mode_csv(out / "mode_000.csv");
    CHECK(psi.size() == 19);
    const AnalysisReport written = read_report_json(out / "report_000.json");

    // re-analyzing the re-read profile reproduces the written report
    Mode m;
    m.energy = written.energy;
    m.vector = psi;
    const ZeroModeResult z = find_zero_mode(
        preset_family(PresetVariant::single_system_reservoir, cfg.params), 1.0, 1.1, 1e-8);
    const LatticeGraph g = build_preset(PresetVariant::single_system_reservoir, cfg.params,
                                        z.t_star);
    const AnalysisReport again = analyze_mode(m, g, written.alpha);
    CHECK(std::abs(again.recurrence - written.recurrence) <= 1e-12);
    CHECK(std::abs(again.fit_even.slope - written.fit_even.slope) <= 1e-12);
    CHECK(std::abs(again.fit_odd.intercept - written.fit_odd.intercept) <= 1e-12);
    CHECK(std::abs(again.intensity.relative_std - written.intensity.relative_std) <= 1e-12);
    REQUIRE(again.fluxes.size() == written.fluxes.size());
    for (size_t k = 0; k < again.fluxes.size(); ++k)
        CHECK(std::abs(again.fluxes[k].value - written.fluxes[k].value) <= 1e-12);
    REQUIRE(again.continuity_residuals.size() == written.continuity_residuals.size());
    for (size_t k = 0; k < again.continuity_residuals.size(); ++k)
        CHECK(std::abs(again.continuity_residuals[k] - written.continuity_residuals[k]) <= 1e-12);
}

TEST_CASE("run_scenario: repeated runs are byte-identical")
{
    const fs::path out_a = temp_dir("det_a");
    const fs::path out_b = temp_dir("det_b");
    ScenarioConfig cfg = parse_config(R"({
      "version": 1,
      "preset": "mirror_bridge",
      "grid": {"lo": 0.98, "hi": 1.06, "step": 0.01}
    })");
    CHECK(run_scenario(cfg, Action::sweep, out_a) == 0);
    CHECK(run_scenario(cfg, Action::sweep, out_b) == 0);
    CHECK(slurp(out_a / "sweep.csv") == slurp(out_b / "sweep.csv"));
    CHECK(slurp(out_a / "events.json") == slurp(out_b / "events.json"));
}

TEST_CASE("parse_config: output directory key")
{
    const ScenarioConfig cfg = parse_config(
        R"({"version": 1, "preset": "mirror_bridge", "output": "results/run1"})");
    REQUIRE(cfg.output_dir.has_value());
    CHECK(*cfg.output_dir == "results/run1");
}

TEST_CASE("run_scenario: config analysis mismatch is rejected")
{
    ScenarioConfig cfg = parse_config(R"({
      "version": 1,
      "preset": "mirror_bridge",
      "analysis": "sweep"
    })");
    CHECK_THROWS_AS(run_scenario(cfg, Action::spectrum, temp_dir("mismatch")), config_error);
}

#ifdef NHLAT_CLI_PATH
TEST_CASE("cli maps error classes to exit codes")
{
    const fs::path dir = temp_dir("exit_codes");
    const std::string cli = NHLAT_CLI_PATH;
    auto run = [&](const std::string& args) {
        const int rc = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };

    std::ofstream(dir / "bad.json") << R"({"version": 1, "preset": "mirror_bridge",)"
                                       R"( "parameters": {"gamma": -1}})";
    CHECK(run("spectrum --config " + (dir / "bad.json").string() +
              " --out " + (dir / "o1").string()) == 2);

    // a bracket reaching past the exceptional point: numerical failure
    std::ofstream(dir / "ep.json") << R"({"version": 1, "preset": "single_system_reservoir"})";
    CHECK(run("find-zero --config " + (dir / "ep.json").string() + " --grid 1.0:1.2:0.01" +
              " --out " + (dir / "o2").string()) == 3);

    CHECK(run("reproduce fig9 --out " + (dir / "o3").string()) == 2);
}
#endif

TEST_CASE("run_reproduce rejects unknown figures")
{
    CHECK_THROWS_AS(run_reproduce("fig9", temp_dir("fig9")), config_error);
}
