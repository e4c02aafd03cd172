#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hsplab/functionals.hpp"
#include "hsplab/grid.hpp"
#include "hsplab/operators.hpp"
#include "hsplab/params.hpp"

namespace hsplab {

struct SolverConfig {
    double dt_init = 1e-3;
    double dt_min = 1e-10;
    double dt_max = 0.5;
    double t_end = 10.0;
    double blowup_threshold = 1e3;       // multiple of the initial H^1 norm squared
    double dissipation_threshold = 1e-3; // fraction of the initial H^1 norm squared
    std::size_t record_stride = 1;
    double safety = 0.9;
    double tolerance = 1e-6;             // relative local error per step
    bool adaptive = true;                // false: fixed steps of dt_init
    bool nonlinear = true;               // false: pure heat flow
    bool stop_on_dissipation = true;
    OuterBoundary boundary = OuterBoundary::dirichlet;
    std::vector<double> snapshot_times;  // fields kept at these times (at most 128)
    std::size_t max_steps = 50'000'000;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

inline constexpr std::size_t kMaxSnapshots = 128;

enum class Outcome { dissipative, blowup, undecided };

const char* to_string(Outcome o);

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Discrete energy-flow quantities at a recorded time, all in the inner
/// product sum_j a_j b_j V_j:
///   dirichlet = -<L u, u>, dissipation = <L u, L u>, work = -<L u, N(u)>,
/// so that d/dt dirichlet = -2 dissipation + 2 work along the semi-discrete flow.
struct FlowSample {
    double dirichlet = 0.0;
    double dissipation = 0.0;
    double work = 0.0;
};

struct Snapshot {
    double t = 0.0;
    RadialField u;
};

struct Trajectory {
    ProblemParams params;
    SolverConfig config;
    std::vector<double> times;
    std::vector<double> dts;  // step that led to each recorded time (0 at t = 0)
    std::vector<FunctionalReport> reports;
    std::vector<FlowSample> flow;
    std::vector<Snapshot> snapshots;
    Outcome outcome = Outcome::undecided;
    double t_detect = std::numeric_limits<double>::quiet_NaN();
    StepStats stats;
    /// h1_sq after each of the last (up to 10) accepted steps.
    std::vector<double> recent_h1;
    std::string diagnostic;

    double t_final() const { return times.empty() ? 0.0 : times.back(); }
};

/// Stepper for u_t = L u + w |u|^{p*-2} u, with w the cell average of
/// |x|^{-gamma}. One step is Crank-Nicolson on L with a Heun
/// predictor-corrector on the nonlinear term.
class Stepper {
public:
    Stepper(const ProblemParams& params, GridPtr grid, OuterBoundary bc, bool nonlinear = true);

    /// Advances u by dt in place. Throws NumericalError if the state stops
    /// being finite.
    void step(std::vector<double>& u, double dt) const;
    RadialField step(const RadialField& u, double dt) const;

    void nonlinearity(const std::vector<double>& u, std::vector<double>& out) const;
    FlowSample flow(const std::vector<double>& u) const;

    const RadialLaplacian& laplacian() const { return lap_; }
    const GridPtr& grid() const { return grid_; }

private:
    ProblemParams params_;
    GridPtr grid_;
    RadialLaplacian lap_;
    std::vector<double> weight_;
    bool nonlinear_;
};

/// Single step with the default (Dirichlet, nonlinear) stepper.
RadialField step(const RadialField& u, double dt, const ProblemParams& params);

Trajectory run(const RadialField& u0, const ProblemParams& params, const SolverConfig& config);

/// Relative defect of the energy identity between recorded times t1 < t2,
///   [D(t2) + 2 int dissipation - D(t1) - 2 int work] / D(t1),
/// time integrals by the trapezoid rule over recorded samples.
double energy_balance_residual(const Trajectory& traj, double t1, double t2);

/// ||u(t) - e^{t Delta} u0 - int_0^t e^{(t - s) Delta} N(u(s)) ds|| / ||u(t)||
/// with the time integral by the trapezoid rule over the snapshots in [0, t].
double duhamel_residual(const Trajectory& traj, const RadialField& u0, double t);

struct LyapunovReport {
    double start_time = 0.0;      // first recorded time with ||u||_{H^1} below half its initial value
    std::size_t checked = 0;      // consecutive pairs examined
    std::size_t increases = 0;    // pairs with h1 strictly increasing
    double max_increase = 0.0;    // largest relative increase
};

/// Monotonicity of the recorded h1_sq after the norm has halved.
LyapunovReport lyapunov_check(const Trajectory& traj);

}  // namespace hsplab
