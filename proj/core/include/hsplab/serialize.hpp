#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hsplab/functionals.hpp"
#include "hsplab/solver.hpp"
#include "hsplab/spectral.hpp"
#include "hsplab/theory.hpp"

namespace hsplab {

using Json = nlohmann::ordered_json;

Json to_json(const FunctionalReport& r);
Json to_json(const Verdict& v);
Json to_json(const DecayCharacterEstimate& e);
Json to_json(const RatePrediction& p);
Json to_json(const DecayReport& r);
Json to_json(const SplittingVerdict& v);

/// {scenario_hash, outcome, t_detect, steps_accepted, steps_rejected,
///  decay_report, prediction}; absent parts are null.
Json run_report(const std::string& scenario_hash, const Trajectory& traj,
                const DecayReport* decay, const RatePrediction* prediction);

inline constexpr const char* kTrajectoryHeader = "t,dt,h1_sq,l2_sq,lqc,hs_term,energy,nehari";

/// Numbers are written with 17 significant digits so files round-trip.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_field_csv(std::ostream& os, const RadialField& u);
void write_spectrum_csv(std::ostream& os, const SpectralField& s);
void write_splitting_csv(std::ostream& os, const SplittingVerdict& v);

/// Shortest round-trip decimal form of a double; "nan"/"inf" for non-finite values.
std::string format_number(double x);

}  // namespace hsplab
