/// @file test_harness.cpp
/// @brief Experiment orchestration: configuration parsing, rate fits,
///        deterministic reports, and degenerate-input guards.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poros/errors.hpp"
#include "poros/harness.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace poros;

namespace {

std::string write_temp_config(const std::string& body) {
    static int counter = 0;
    std::filesystem::path p = std::filesystem::temp_directory_path() /
                              ("poros_test_cfg_" + std::to_string(counter++) + ".json");
    std::ofstream out(p);
    out << body;
    return p.string();
}

} // namespace

// ============================================================================
// Configuration parsing
// ============================================================================

TEST_CASE("JSON config overrides defaults field by field") {
    std::string path = write_temp_config(R"({
        "geometry": {
            "cell": {"inclusions": [[0.25, 0.25, 0.5, 0.5]], "margin": 0.1},
            "channel": {"L": 2.0, "h": 1.0, "H": 0.75},
            "strip": {"L_top": 5, "L_bot": 6}
        },
        "forcing": {"constant": [3.0, -1.0]},
        "epsilons": [0.5, 0.25],
        "solver": {"bl_resolution": 48, "cell_resolution": 96,
                   "micro_pts_per_eps": 8, "robustness_a": -0.125,
                   "shift_offsets": [-0.5]},
        "output": {"dir": "/tmp/poros_cfg_test_out"}
    })");
    ExperimentConfig cfg = load_config(path);
    CHECK(cfg.cell.inclusions.size() == 1);
    CHECK(cfg.cell.inclusions[0].x1 == doctest::Approx(0.5));
    CHECK(cfg.L == doctest::Approx(2.0));
    CHECK(cfg.h == doctest::Approx(1.0));
    CHECK(cfg.H == doctest::Approx(0.75));
    CHECK(cfg.L_top == 5);
    CHECK(cfg.L_bot == 6);
    CHECK(cfg.forcing.f1(0.3, 0.2) == doctest::Approx(3.0));
    CHECK(cfg.forcing.f2(0.3, 0.2) == doctest::Approx(-1.0));
    CHECK(cfg.epsilons == std::vector<double>{0.5, 0.25});
    CHECK(cfg.bl_resolution == 48);
    CHECK(cfg.cell_resolution == 96);
    CHECK(cfg.micro_pts_per_eps == 8);
    CHECK(cfg.robustness_a == doctest::Approx(-0.125));
    CHECK(cfg.shift_offsets == std::vector<double>{-0.5});
    CHECK(cfg.output_dir == "/tmp/poros_cfg_test_out");
    std::remove(path.c_str());
}

TEST_CASE("term-based forcing round-trips through the config") {
    std::string path = write_temp_config(R"({
        "geometry": {"cell": {"inclusions": [[0.25, 0.25, 0.5, 0.5]]}},
        "forcing": {"f1": [{"coef": 2.0, "ypow": 1, "mode": "sin", "k": 3}],
                    "f2": [{"coef": -0.5, "ypow": 0, "mode": "const"}]}
    })");
    ExperimentConfig cfg = load_config(path);
    const double x = 0.17, y = -0.4, pi = 3.14159265358979323846;
    CHECK(cfg.forcing.f1(x, y) ==
          doctest::Approx(2.0 * y * std::sin(2 * pi * 3 * x / cfg.L)));
    CHECK(cfg.forcing.f2(x, y) == doctest::Approx(-0.5));
    std::remove(path.c_str());
}

TEST_CASE("bad configs are rejected with ConfigError") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_config("/nonexistent/poros.json"), ConfigError);
    }
    SUBCASE("non-decreasing epsilons") {
        std::string path = write_temp_config(R"({
            "geometry": {"cell": {"inclusions": [[0.25, 0.25, 0.5, 0.5]]}},
            "epsilons": [0.125, 0.25]
        })");
        CHECK_THROWS_AS(load_config(path), ConfigError);
        std::remove(path.c_str());
    }
    SUBCASE("unknown forcing mode") {
        std::string path = write_temp_config(R"({
            "geometry": {"cell": {"inclusions": [[0.25, 0.25, 0.5, 0.5]]}},
            "forcing": {"f1": [{"coef": 1.0, "mode": "tan"}]}
        })");
        CHECK_THROWS_AS(load_config(path), ConfigError);
        std::remove(path.c_str());
    }
}

TEST_CASE("built-in experiments validate and expose coherent geometry") {
    for (ExperimentConfig cfg :
         {sample_config(), symmetric_sample_config(), clear_gap_sample_config()}) {
        CHECK(!cfg.cell.inclusions.empty());
        ChannelGeometry ch = cfg.channel(0.25);
        CHECK_NOTHROW(ch.validate());
        StripGeometry s = cfg.strip();
        CHECK_NOTHROW(s.validate());
        CHECK(s.L_top == cfg.L_top);
    }
}

// ============================================================================
// Rate fits
// ============================================================================

TEST_CASE("fit_rate recovers exact power laws") {
    auto series = [](double rate) {
        std::vector<std::pair<double, double>> pts;
        for (double eps : {0.25, 0.125, 0.0625})
            pts.push_back({eps, 3.7 * std::pow(eps, rate)});
        return pts;
    };
    CHECK(fit_rate(series(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_rate(series(1.7)) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(fit_rate(series(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_rate rejects degenerate inputs") {
    CHECK_THROWS_AS(fit_rate({{0.25, 1.0}}), InvariantError);
    CHECK_THROWS_AS(fit_rate({{0.25, 1.0}, {0.125, 0.0}}), InvariantError);
    CHECK_THROWS_AS(fit_rate({{0.25, 1.0}, {0.125, -0.5}}), InvariantError);
}

// ============================================================================
// Deterministic reports
// ============================================================================

TEST_CASE("constants runs are bytewise reproducible") {
    ExperimentConfig cfg = clear_gap_sample_config();
    cfg.bl_resolution = 32;
    cfg.cell_resolution = 32;
    std::string a = constants_to_json(run_constants(cfg));
    std::string b = constants_to_json(run_constants(cfg));
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("serialization rejects non-finite values") {
    ConstantsReport c;
    c.K = {{{0.01, 0.0}, {0.0, 0.01}}};
    c.C1_bl = std::nan("");
    CHECK_THROWS_AS(constants_to_json(c), InvariantError);
}

TEST_CASE("report JSON exposes the sweep structure and CSV skips failures") {
    ErrorReport rep;
    rep.constants.K = {{{0.01, 0.0}, {0.0, 0.01}}};
    rep.constants.K_energy = rep.constants.K;
    rep.constants.K_eigenvalues = {0.01, 0.01};
    rep.constants.C1_bl = -0.1;

    SweepEntry good;
    good.eps = 0.25;
    good.ok = true;
    good.vel_L2_Omega1 = 1e-3;
    good.M_eps = 0.011;
    good.M_eff = 0.0112;
    SweepEntry bad;
    bad.eps = 0.125;
    bad.ok = false;
    bad.error = "solver blew up";
    rep.entries = {good, bad};
    rep.rates = {{"vel_L2_Omega1", 1.5}};

    auto parsed = nlohmann::json::parse(report_to_json(rep));
    REQUIRE(parsed.contains("constants"));
    REQUIRE(parsed.contains("sweep"));
    REQUIRE(parsed.contains("rates"));
    CHECK(parsed["sweep"].size() == 2);
    CHECK(parsed["sweep"][1]["ok"] == false);
    CHECK(parsed["sweep"][1]["error"] == "solver blew up");

    std::string csv = sweep_to_csv(rep);
    size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 2); // header + the one successful entry
}

// ============================================================================
// Degenerate inputs
// ============================================================================

TEST_CASE("zero forcing yields zero jump with a safe ratio") {
    ExperimentConfig cfg = sample_config();
    ChannelGeometry ch = cfg.channel(0.25);
    Forcing zero = Forcing::constant(0.0, 0.0);
    MicroscaleSolution micro = solve_microscale(ch, zero, 16);
    EffectiveSolution eff = solve_effective_stokes(ch, zero, -0.1, micro.grid.nx());
    JumpMeasurement jump = measure_interface_jump(micro, eff, 0.2);
    CHECK(std::abs(jump.measured_mean) <= 1e-12);
    CHECK(jump.predicted_mean == doctest::Approx(0.0));
    CHECK(jump.ratio == doctest::Approx(0.0)); // guarded division
    CHECK(std::isfinite(jump.ratio));
}
