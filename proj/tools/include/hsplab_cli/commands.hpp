#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hsplab/serialize.hpp"
#include "hsplab/solver.hpp"
#include "hsplab/spectral.hpp"
#include "hsplab/theory.hpp"
#include "hsplab_cli/scenario.hpp"

namespace hsplab::cli {

/// Process exit codes: scientific failure (1), indeterminate run (2), misuse (3).
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUndecided = 2, kExitInvalid = 3 };

struct AnalysisResult {
    Analysis analysis;
    std::pair<double, double> window{0.0, 0.0};
    std::optional<DecayReport> decay;
    std::vector<std::string> errors;  // analyses that could not be evaluated
    double log_envelope_ratio = 0.0;
    bool preliminary_decay_holds = false;
    std::optional<SplittingVerdict> splitting;
    std::optional<KatoSeries> kato;

    /// False when a requested bound or diagnostic fails.
    bool passed() const;
    Json to_json() const;
};

struct SimulationResult {
    std::string hash;
    Trajectory trajectory;
    std::optional<RatePrediction> prediction;
    std::string prediction_error;
    std::vector<AnalysisResult> analyses;
    LyapunovReport lyapunov;

    bool analyses_passed() const;
};

/// Solver config with the snapshot schedule the scenario asks for.
SolverConfig solver_config(const Scenario& s);

/// Throws ValidationError when a requested analysis cannot apply to the
/// scenario (d < 5 for rates, splitting exponent m too small).
void validate_analyses(const Scenario& s);

/// Runs the flow and every analysis. Analyses that do not apply (e.g. a decay
/// fit on a blowup run) record their error instead of throwing.
SimulationResult simulate(const Scenario& s);

struct CharacterReport {
    DecayCharacterEstimate u0;
    DecayCharacterEstimate lambda_u0;
};

/// Decay character of u0 and Lambda u0 over the first analysis window
/// (default [4 d_rho, 0.2]), on 64 low frequencies covering [0, hi].
CharacterReport decay_character(const Scenario& s);

struct CheckSummary {
    std::string name;
    std::size_t evaluated = 0;
    double worst_ratio = 0.0;
    std::string worst_sample;
    bool holds = true;
    std::string failing_sample;  // first failure, empty when the check holds
};

struct SuiteReport {
    std::vector<CheckSummary> checks;
    double hardy_sobolev_sharp = 0.0;         // closed-form constant, attained by W_gamma
    double ground_state_hs_ratio = 0.0;       // ratio measured on the sampled W_gamma
    double smoothing_sharp = 0.0;             // L^2 best constant of the weighted smoothing bound
    bool hs_attained_at_ground_state = false; // worst ratio is W's, within 1e-3 of the sharp constant
    bool all_pass = false;
};

/// Hardy-Sobolev, Rellich, Lorentz-Holder, critical embedding and weighted
/// smoothing checks over the seeded corpus (plus W_gamma when requested).
SuiteReport run_inequality_suite(const Scenario& s);

struct SweepRow {
    double value = 0.0;
    std::string outcome;
    double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    double predicted_exponent = std::numeric_limits<double>::quiet_NaN();
    std::optional<bool> bound_satisfied;
    std::string regime;
    std::string error;
    Json report;  // run report of the member, null when it failed
};

/// Scenario with the sweep axis set to `value`.
Scenario sweep_member(const Scenario& s, double value);

/// One row per axis value in axis order; members run on up to `threads`
/// workers and per-member failures are recorded in the row.
std::vector<SweepRow> run_sweep(const Scenario& s, unsigned threads);

inline constexpr const char* kSweepHeader =
    "value,outcome,fitted_exponent,predicted_exponent,bound_satisfied,regime,error";

Json to_json(const SuiteReport& r);
Json to_json(const CharacterReport& r);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// Subcommands. Each writes its artifacts under out_dir (created on demand),
// prints a summary to `log` and returns the exit code.
int cmd_simulate(const Scenario& s, const std::string& out_dir, std::ostream& log);
int cmd_decay_character(const Scenario& s, const std::string& out_dir, std::ostream& log);
int cmd_check_inequalities(const Scenario& s, const std::string& out_dir, std::ostream& log);
int cmd_predict(const Scenario& s, const std::string& out_dir, std::ostream& log);
int cmd_sweep(const Scenario& s, const std::string& out_dir, unsigned threads, std::ostream& log);

}  // namespace hsplab::cli
