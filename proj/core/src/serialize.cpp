#include "hsplab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace hsplab {

namespace {

Json number(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json to_json(const FunctionalReport& r) {
    return Json{{"h1_sq", number(r.h1_sq)},   {"l2_sq", number(r.l2_sq)},
                {"lqc", number(r.lqc)},       {"hs_term", number(r.hs_term)},
                {"energy", number(r.energy)}, {"nehari", number(r.nehari)}};
}

Json to_json(const Verdict& v) {
    return Json{{"lhs", number(v.lhs)}, {"rhs", number(v.rhs)}, {"ratio", number(v.ratio)},
                {"holds", v.holds}};
}

Json to_json(const DecayCharacterEstimate& e) {
    return Json{{"r_star", number(e.r_star)},
                {"window", Json::array({e.fit_window.first, e.fit_window.second})},
                {"residual", number(e.fit_residual)},
                {"reliable", e.reliable}};
}

Json to_json(const RatePrediction& p) {
    Json j{{"regime", to_string(p.regime)}};
    if (p.regime == Regime::algebraic) {
        j["exponent"] = p.exponent;
    } else {
        j["log_power"] = p.exponent;
    }
    j["bootstrap_case"] = to_string(p.bootstrap_case);
    j["q_star"] = number(p.q_star);
    return j;
}

Json to_json(const DecayReport& r) {
    return Json{{"fitted_exponent", number(r.fitted_exponent)},
                {"fit_window", Json::array({r.fit_window.first, r.fit_window.second})},
                {"fit_residual", number(r.fit_residual)},
                {"prediction", to_json(r.prediction)},
                {"bound_satisfied", r.bound_satisfied},
                {"log_fit_exponent", number(r.log_fit_exponent)},
                {"samples", r.samples}};
}

Json to_json(const SplittingVerdict& v) {
    return Json{{"m", v.m},
                {"margin", number(v.margin)},
                {"c_tilde", number(v.c_tilde)},
                {"degenerate", v.degenerate},
                {"intervals", v.intervals.size()},
                {"worst_relative_slack", number(v.worst_relative_slack)},
                {"holds", v.holds}};
}

Json run_report(const std::string& scenario_hash, const Trajectory& traj,
                const DecayReport* decay, const RatePrediction* prediction) {
    Json j;
    j["scenario_hash"] = scenario_hash;
    j["outcome"] = to_string(traj.outcome);
    j["t_detect"] = number(traj.t_detect);
    j["steps_accepted"] = traj.stats.accepted;
    j["steps_rejected"] = traj.stats.rejected;
    j["decay_report"] = decay ? to_json(*decay) : Json(nullptr);
    j["prediction"] = prediction ? to_json(*prediction) : Json(nullptr);
    return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& r = traj.reports[i];
        os << format_number(traj.times[i]) << ',' << format_number(traj.dts[i]) << ','
           << format_number(r.h1_sq) << ',' << format_number(r.l2_sq) << ','
           << format_number(r.lqc) << ',' << format_number(r.hs_term) << ','
           << format_number(r.energy) << ',' << format_number(r.nehari) << '\n';
    }
}

void write_field_csv(std::ostream& os, const RadialField& u) {
    os << "r,value\n";
    for (std::size_t j = 0; j < u.size(); ++j) {
        os << format_number(u.grid().nodes[j]) << ',' << format_number(u[j]) << '\n';
    }
}

void write_spectrum_csv(std::ostream& os, const SpectralField& s) {
    os << "rho,value\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        os << format_number(s.frequencies().rho[k]) << ',' << format_number(s.values()[k]) << '\n';
    }
}

void write_splitting_csv(std::ostream& os, const SplittingVerdict& v) {
    os << "t,lhs,rhs,slack\n";
    for (const auto& iv : v.intervals) {
        os << format_number(iv.t1) << ',' << format_number(iv.lhs) << ','
           << format_number(iv.rhs) << ',' << format_number(iv.slack) << '\n';
    }
}

}  // namespace hsplab
