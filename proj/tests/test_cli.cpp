#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hsplab/errors.hpp"
#include "hsplab_cli/commands.hpp"
#include "hsplab_cli/scenario.hpp"

using namespace hsplab;
using namespace hsplab::cli;
using doctest::Approx;
using nlohmann::json;

namespace {
json minimal() {
    return json::parse(R"({
        "schema_version": 1,
        "params": {"d": 5, "gamma": 1.0},
        "grid": {"n": 256, "r_max": 20},
        "data": {"kind": "gaussian", "amplitude": 0.01, "width": 1},
        "solver": {"t_end": 0.5},
        "output_dir": "out/x"
    })");
}

std::string error_field(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hsplab_test_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}
}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
    const Scenario s = parse_scenario(minimal());
    CHECK(s.d == 5);
    CHECK(s.n == 256);
    CHECK(std::get<Gaussian>(s.data).amplitude == 0.01);
    CHECK(s.solver.t_end == 0.5);
    CHECK(s.inequalities.corpus_size == 100);
    CHECK_FALSE(s.sweep.has_value());
}

TEST_CASE("parse errors carry dotted paths") {
    json d = minimal();
    d["solver"]["bogus"] = 1;
    CHECK(error_field(d) == "solver.bogus");
    d = minimal();
    d["params"]["gamma"] = 2.0;
    CHECK(error_field(d).rfind("params.", 0) == 0);
    d = minimal();
    d["schema_version"] = 2;
    CHECK(error_field(d) == "schema_version");
    d = minimal();
    d["grid"]["n"] = "many";
    CHECK(error_field(d) == "grid.n");
    d = minimal();
    d["data"] = {{"kind", "frequency_profile"}, {"s", -4.0}, {"cutoff", 1.0}, {"amplitude", 1.0}};
    CHECK(error_field(d).rfind("data", 0) == 0);
    d = minimal();
    d["sweep"] = {{"axis", "lambda"}, {"values", json::array()}};
    CHECK(error_field(d) == "sweep.values");
    d = minimal();
    d["analyses"] = {{{"fit_window", {0.1, 5.0}}}};
    CHECK(error_field(d).rfind("analyses[0].fit_window", 0) == 0);
}

TEST_CASE("hash is canonical and ignores the output directory") {
    const Scenario a = parse_scenario(minimal());
    json moved = minimal();
    moved["output_dir"] = "elsewhere";
    CHECK(scenario_hash(a) == scenario_hash(parse_scenario(moved)));
    CHECK(scenario_hash(a).size() == 16);
    json changed = minimal();
    changed["grid"]["n"] = 257;
    CHECK(scenario_hash(a) != scenario_hash(parse_scenario(changed)));
    json explicit_default = minimal();
    explicit_default["seed"] = a.seed;
    CHECK(scenario_hash(a) == scenario_hash(parse_scenario(explicit_default)));
    // The canonical form parses back to the same scenario.
    json round = a.to_json();
    round["output_dir"] = a.output_dir;
    CHECK(scenario_hash(parse_scenario(round)) == scenario_hash(a));
}

TEST_CASE("snapshot schedule is log-spaced after zero") {
    const auto s = snapshot_schedule(100.0, 5);
    REQUIRE(s.size() == 6);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == Approx(0.02));
    CHECK(s[5] == Approx(100.0));
    for (std::size_t i = 2; i < s.size(); ++i) {
        CHECK(s[i] / s[i - 1] == Approx(s[2] / s[1]));
    }
}

TEST_CASE("derived q* per data family") {
    CHECK(derived_q_star(Gaussian{}) == 1.0);
    CHECK(derived_q_star(ScaledGroundState{}) == -1.0);
    CHECK(derived_q_star(FrequencyProfile{-3.0, 1.0, 1.0}) == -2.0);
    Scenario s = parse_scenario(minimal());
    CHECK(effective_q_star(s) == 1.0);
    s.q_star = -0.5;
    CHECK(effective_q_star(s) == -0.5);
}

TEST_CASE("sweep members change exactly one axis") {
    json d = minimal();
    d["sweep"] = {{"axis", "lambda"}, {"values", {0.5, 2.0}}};
    const Scenario s = parse_scenario(d);
    const Scenario m = sweep_member(s, 2.0);
    CHECK(std::get<Gaussian>(m.data).amplitude == 2.0);
    CHECK_FALSE(m.sweep.has_value());
    CHECK(m.analyses.size() == 1);
    CHECK(m.gamma == s.gamma);
    Scenario g = s;
    g.sweep->axis = "gamma";
    CHECK(sweep_member(g, 0.5).gamma == 0.5);
    g.sweep->axis = "d";
    CHECK(sweep_member(g, 7.0).d == 7);
}

TEST_CASE("sweep keeps a row for every value, failing ones included") {
    json d = minimal();
    d["solver"]["t_end"] = 0.2;
    d["sweep"] = {{"axis", "gamma"}, {"values", {1.5, 2.5, 0.5}}};
    const Scenario s = parse_scenario(d);
    const auto rows = run_sweep(s, 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].value == 0.5);
    CHECK(rows[1].value == 1.5);
    CHECK(rows[2].value == 2.5);
    CHECK(rows[2].outcome == "error");
    CHECK_FALSE(rows[2].error.empty());
    CHECK(rows[0].outcome != "error");
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    std::istringstream in(csv.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);
    CHECK(csv.str().rfind(kSweepHeader, 0) == 0);
}

TEST_CASE("predict command writes its report") {
    const auto dir = scratch("predict");
    std::ostringstream log;
    const Scenario s = parse_scenario(minimal());
    CHECK(cmd_predict(s, dir.string(), log) == kExitOk);
    std::ifstream in(dir / "prediction.json");
    REQUIRE(in);
    const json rep = json::parse(in);
    CHECK(rep.dump().find("algebraic") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("solver config follows the scenario") {
    json d = minimal();
    d["analyses"] = {{{"fit_window", {0.05, 0.5}}, {"splitting_m", 4.0}}};
    const Scenario s = parse_scenario(d);
    const SolverConfig c = solver_config(s);
    CHECK(c.t_end == 0.5);
    CHECK(c.snapshot_times.size() == kDefaultSnapshots + 1);
    CHECK(c.snapshot_times.front() == 0.0);
}
