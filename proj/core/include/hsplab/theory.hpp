#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hsplab/grid.hpp"
#include "hsplab/params.hpp"
#include "hsplab/solver.hpp"

namespace hsplab {

enum class Regime { algebraic, logarithmic };
enum class BootstrapCase { ratio_gt_1, ratio_eq_1, ratio_lt_1 };

const char* to_string(Regime r);
const char* to_string(BootstrapCase c);

struct RatePrediction {
    Regime regime = Regime::algebraic;
    /// Algebraic: power of (1 + t)^{-1}, min{d/2 + q*, 1}. Logarithmic: power
    /// of [ln(e + t)]^{-1}, always 2.
    double exponent = 1.0;
    BootstrapCase bootstrap_case = BootstrapCase::ratio_gt_1;
    double q_star = 0.0;

    /// Predicted envelope at time t, 1 at t = 0.
    double envelope(double t) const;
};

/// Needs d >= 5 and q_star > -d/2.
RatePrediction rate_predictor(const ProblemParams& params, double q_star);

struct DecayReport {
    double fitted_exponent = 0.0;    // -slope of log h vs log(1 + t)
    std::pair<double, double> fit_window{0.0, 0.0};
    double fit_residual = 0.0;       // RMS of the log-log fit
    RatePrediction prediction;
    bool bound_satisfied = false;    // h(t) <= C envelope(t), C fixed at t_lo
    double log_fit_exponent = 0.0;   // -slope of log h vs log ln(e + t)
    std::size_t samples = 0;
};

struct PowerFit {
    double exponent = 0.0;  // -slope of log h against log(t + offset)
    double residual = 0.0;
    std::size_t samples = 0;
};

/// Least-squares power law over the window. offset 0 measures the large-time
/// exponent in t itself, offset 1 the (1 + t) form used for decay reports.
PowerFit fit_power_law(const std::vector<double>& times, const std::vector<double>& h,
                       std::pair<double, double> window, double offset);

/// Fit on raw samples (t_i, h_i); the window must hold at least 16 samples.
DecayReport fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& h,
                               std::pair<double, double> window, const RatePrediction& prediction);

/// Fit of the recorded h1_sq. Blowup runs are rejected; undecided runs are
/// accepted only when h1_sq is nonincreasing over the window (a finite
/// horizon ending before the dissipation threshold is reached).
DecayReport fit_decay_exponent(const Trajectory& traj, std::pair<double, double> window,
                               const RatePrediction& prediction);

/// Default fit window [t_end / 10, t_end].
std::pair<double, double> default_fit_window(const Trajectory& traj);

/// max over the window of h(t) [ln(e+t)]^2 divided by its value at the first
/// window sample.
double log_envelope_ratio(const Trajectory& traj, std::pair<double, double> window);

/// h1_sq(t) <= C [ln(e + t)]^{-2} over the window with C fixed at its start:
/// the preliminary logarithmic decay available for every d >= 5.
bool preliminary_decay_holds(const Trajectory& traj, std::pair<double, double> window);

/// ||e^{t Delta} Lambda^power u0||_2^2 for each t, evaluated on frequency sets
/// refined towards the origin as t grows. power 1 gives the linear part of the
/// H^1 decay, power 0 the L^2 heat decay.
std::vector<double> heat_decay_series(const RadialField& u0, const std::vector<double>& times,
                                      double power);
std::vector<double> linear_part_decay(const RadialField& u0, const std::vector<double>& times);

struct SplittingInterval {
    double t0 = 0.0;
    double t1 = 0.0;
    double lhs = 0.0;    // [g h](t1) - [g h](t0), divided by t1 - t0
    double rhs = 0.0;    // trapezoid of g' * low-frequency H^1 mass over B(t)
    double slack = 0.0;  // rhs - lhs
    double scale = 0.0;  // mean of g' h at the endpoints
    bool holds = false;
};

struct SplittingVerdict {
    double m = 0.0;
    double margin = 0.0;    // max observed work / dissipation
    double c_tilde = 0.0;   // 2 (1 - margin), floored at 1
    bool degenerate = false; // margin >= 1/2: outside the Lyapunov regime
    std::vector<SplittingInterval> intervals;
    double worst_relative_slack = 0.0;
    bool holds = false;

    /// Radius of B(t): sqrt(g'(t) / (c_tilde g(t))) with g = (1 + t)^m.
    double radius(double t) const;
};

inline constexpr double kSplittingTolerance = 1e-3;

/// Discrete Fourier-splitting inequality
///   d/dt (g ||u||_{H^1}^2) <= g' int_{B(t)} | |xi| u^ |^2
/// between consecutive snapshots. Needs m > max{d/2 + q*, 1} and at least two
/// snapshots; an interval holds when slack >= -1e-3 * scale.
SplittingVerdict fourier_splitting_check(const Trajectory& traj, double m, double q_star);

struct KatoSeries {
    double q = 0.0;
    bool admissible = false;           // 1/q_c - 1/(d (p* - 1)) < 1/q < 1/q_c
    std::vector<double> times;
    std::vector<double> values;        // t^{(d/2)(1/q_c - 1/q)} ||u(t)||_{L^q}
    bool decreasing_final_decade = false;
};

bool kato_admissible(const ProblemParams& params, double q);

/// Evaluated on the trajectory snapshots with t > 0. Throws for q <= 1.
KatoSeries kato_weighted_norm(const Trajectory& traj, double q);

}  // namespace hsplab
