#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hsplab/initial_data.hpp"
#include "hsplab/params.hpp"
#include "hsplab/solver.hpp"

namespace hsplab::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kDefaultSnapshots = 127;

struct Analysis {
    std::optional<std::pair<double, double>> fit_window;
    std::optional<double> splitting_m;
    std::optional<double> kato_q;
    std::pair<double, double> decay_character_window{0.0, 0.2};  // lo = 0: 4 d_rho
};

struct InequalityOptions {
    std::size_t corpus_size = 100;
    bool include_ground_state = true;
    bool rellich = true;
    std::vector<double> smoothing_times{0.1, 1.0, 10.0};
};

struct Sweep {
    std::string axis;  // lambda (data amplitude), gamma, d, q_star
    std::vector<double> values;
};

struct Scenario {
    int d = 5;
    double gamma = 1.0;
    std::size_t n = 2048;
    double r_max = 40.0;
    DataDescriptor data = Gaussian{};
    SolverConfig solver;
    std::size_t snapshots = 0;  // log-spaced snapshot count; 0 picks kDefaultSnapshots when an analysis needs them
    std::vector<Analysis> analyses;
    std::optional<double> q_star;
    InequalityOptions inequalities;
    std::optional<Sweep> sweep;
    std::uint64_t seed = 20240917;
    std::string output_dir = "out";

    /// Canonical JSON form (every field explicit), the input to scenario_hash.
    nlohmann::ordered_json to_json() const;
};

/// Parses and validates a scenario document. Unknown keys, wrong types and
/// violated preconditions throw ValidationError with a dotted field path.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Checks every descriptor against its module's preconditions.
void validate_scenario(const Scenario& s);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

/// Snapshot schedule: 0 and `count` log-spaced times in [2e-4 t_end, t_end].
std::vector<double> snapshot_schedule(double t_end, std::size_t count);

/// q* of Lambda u0 known in closed form for each data family: Gaussian 1,
/// ground state -1 (W ~ r^{2-d}), profile s + 1.
double derived_q_star(const DataDescriptor& data);

/// Scenario q_star when given, else derived_q_star.
double effective_q_star(const Scenario& s);

/// Builds the problem parameters, rewrapping errors under "params.".
ProblemParams scenario_params(const Scenario& s);

}  // namespace hsplab::cli
