#include "hsplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "hsplab/errors.hpp"
#include "hsplab/spectral.hpp"

namespace hsplab {

void SolverConfig::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(dt_min)) throw ValidationError("solver.dt_min", "must be positive");
    if (!positive(dt_init) || !(dt_min < dt_init)) {
        throw ValidationError("solver.dt_init", "need dt_min < dt_init");
    }
    if (!positive(dt_max) || !(dt_init <= dt_max)) {
        throw ValidationError("solver.dt_max", "need dt_init <= dt_max");
    }
    if (!positive(t_end)) throw ValidationError("solver.t_end", "must be positive");
    if (!positive(blowup_threshold)) throw ValidationError("solver.blowup_threshold", "must be positive");
    if (!positive(dissipation_threshold)) {
        throw ValidationError("solver.dissipation_threshold", "must be positive");
    }
    if (record_stride == 0) throw ValidationError("solver.record_stride", "must be at least 1");
    if (!(safety > 0.0 && safety <= 1.0)) throw ValidationError("solver.safety", "must lie in (0, 1]");
    if (!positive(tolerance)) throw ValidationError("solver.tolerance", "must be positive");
    for (double t : snapshot_times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ValidationError("solver.snapshot_times", "times must be finite and nonnegative");
        }
    }
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::dissipative: return "dissipative";
        case Outcome::blowup: return "blowup";
        case Outcome::undecided: return "undecided";
    }
    return "undecided";
}

Stepper::Stepper(const ProblemParams& params, GridPtr grid, OuterBoundary bc, bool nonlinear)
    : params_(params), grid_(std::move(grid)), lap_(*grid_, bc), nonlinear_(nonlinear) {
    weight_ = singular_cell_measure(*grid_, params_.gamma);
    for (std::size_t j = 0; j < grid_->n; ++j) weight_[j] /= grid_->cell_volumes[j];
}

void Stepper::nonlinearity(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(u.size());
    if (!nonlinear_) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double e = params_.p_star - 1.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double a = std::abs(u[j]);
        out[j] = a == 0.0 ? 0.0 : weight_[j] * std::copysign(std::pow(a, e), u[j]);
    }
}

void Stepper::step(std::vector<double>& u, double dt) const {
    const std::size_t n = u.size();
    std::vector<double> lu, n0, n1, rhs(n), star;
    lap_.apply(u, lu);
    nonlinearity(u, n0);
    for (std::size_t j = 0; j < n; ++j) rhs[j] = u[j] + 0.5 * dt * lu[j] + dt * n0[j];
    solve_shifted(lap_, 1.0, -0.5 * dt, rhs, star);
    if (nonlinear_) {
        nonlinearity(star, n1);
        for (std::size_t j = 0; j < n; ++j) {
            rhs[j] = u[j] + 0.5 * dt * lu[j] + 0.5 * dt * (n0[j] + n1[j]);
        }
        solve_shifted(lap_, 1.0, -0.5 * dt, rhs, u);
    } else {
        u = std::move(star);
    }
    for (double x : u) {
        if (!std::isfinite(x)) throw NumericalError("step produced a non-finite state");
    }
}

RadialField Stepper::step(const RadialField& u, double dt) const {
    if (!(dt > 0.0)) throw ValidationError("dt", "step size must be positive");
    std::vector<double> v = u.data();
    step(v, dt);
    return RadialField(u.grid_ptr(), std::move(v));
}

FlowSample Stepper::flow(const std::vector<double>& u) const {
    const auto& g = *grid_;
    std::vector<double> lu, nu;
    lap_.apply(u, lu);
    nonlinearity(u, nu);
    FlowSample f;
    f.dirichlet = -volume_dot(g, lu, u);
    f.dissipation = volume_dot(g, lu, lu);
    f.work = -volume_dot(g, lu, nu);
    return f;
}

RadialField step(const RadialField& u, double dt, const ProblemParams& params) {
    return Stepper(params, u.grid_ptr(), OuterBoundary::dirichlet).step(u, dt);
}

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> thin_snapshot_times(std::vector<double> times, std::string& diagnostic) {
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (times.size() <= kMaxSnapshots) return times;
    std::vector<double> kept;
    const double stride = static_cast<double>(times.size() - 1) / (kMaxSnapshots - 1);
    for (std::size_t k = 0; k < kMaxSnapshots; ++k) {
        kept.push_back(times[static_cast<std::size_t>(std::llround(stride * k))]);
    }
    diagnostic += "snapshot list thinned to 128 entries; ";
    return kept;
}

class Runner {
public:
    Runner(const RadialField& u0, const ProblemParams& params, const SolverConfig& cfg)
        : cfg_(cfg), stepper_(params, u0.grid_ptr(), cfg.boundary, cfg.nonlinear),
          grid_(u0.grid_ptr()), u_(u0.data()) {
        traj_.params = params;
        traj_.config = cfg;
        snaps_ = thin_snapshot_times(cfg.snapshot_times, traj_.diagnostic);
    }

    Trajectory run() {
        double t = 0.0;
        double dt = cfg_.dt_init;
        h1_0_ = h1_norm_sq(RadialField(grid_, u_));
        record(t, 0.0);
        if (!(h1_0_ > 0.0)) {
            traj_.outcome = Outcome::dissipative;
            traj_.diagnostic += "zero initial H^1 norm; ";
            return finish();
        }
        std::size_t since_record = 0;
        std::size_t steps = 0;
        std::vector<double> full, half;
        while (t < cfg_.t_end) {
            if (++steps > cfg_.max_steps) {
                traj_.diagnostic += "step budget exhausted; ";
                break;
            }
            const double target = next_target(t);
            double h = std::min(dt, target - t);
            bool lands = false;
            if (target - t - h <= 1e-12 * std::max(1.0, target)) {
                h = target - t;
                lands = true;
            }
            double err = 0.0;
            bool finite = true;
            try {
                half = u_;
                if (cfg_.adaptive) {
                    full = u_;
                    stepper_.step(full, h);
                    stepper_.step(half, 0.5 * h);
                    stepper_.step(half, 0.5 * h);
                    double diff = 0.0;
                    for (std::size_t j = 0; j < full.size(); ++j) {
                        diff = std::max(diff, std::abs(full[j] - half[j]));
                    }
                    err = diff / std::max(max_abs(half), 1e-300);
                } else {
                    stepper_.step(half, h);
                }
            } catch (const NumericalError&) {
                finite = false;
            }
            if (!finite || err > cfg_.tolerance) {
                ++traj_.stats.rejected;
                if (h <= cfg_.dt_min * (1.0 + 1e-12) || !cfg_.adaptive) {
                    dt_collapse(t);
                    break;
                }
                const double factor = finite ? std::max(0.2, cfg_.safety * std::cbrt(cfg_.tolerance / err))
                                             : 0.25;
                dt = std::max(cfg_.dt_min, h * factor);
                continue;
            }
            u_.swap(half);
            t = lands ? target : t + h;
            ++traj_.stats.accepted;
            if (cfg_.adaptive) {
                const double factor =
                    err > 0.0 ? std::min(5.0, cfg_.safety * std::cbrt(cfg_.tolerance / err)) : 5.0;
                const double grown = std::clamp(h * factor, cfg_.dt_min, cfg_.dt_max);
                // a step shortened to land on a target says nothing about dt
                dt = lands && h < dt ? std::max(dt, grown) : grown;
            }
            const double h1 = h1_norm_sq(RadialField(grid_, u_));
            push_recent(h1);
            ++since_record;
            const bool is_snapshot = is_snapshot_time(t);
            if (since_record >= cfg_.record_stride || is_snapshot || t >= cfg_.t_end) {
                record(t, h);
                since_record = 0;
            }
            if (h1 > cfg_.blowup_threshold * h1_0_) {
                if (traj_.times.back() != t) record(t, h);
                traj_.outcome = Outcome::blowup;
                traj_.t_detect = t;
                return finish();
            }
            if (cfg_.stop_on_dissipation && traj_.times.back() == t && dissipated()) {
                traj_.outcome = Outcome::dissipative;
                return finish();
            }
        }
        if (traj_.times.back() != t) record(t, 0.0);
        if (traj_.outcome != Outcome::blowup) {
            traj_.outcome = dissipated() ? Outcome::dissipative : Outcome::undecided;
        }
        return finish();
    }

private:
    double next_target(double t) const {
        for (double s : snaps_) {
            if (s > t * (1.0 + 1e-14) + 1e-300 && s < cfg_.t_end) return s;
        }
        return cfg_.t_end;
    }

    bool is_snapshot_time(double t) const {
        return std::find(snaps_.begin(), snaps_.end(), t) != snaps_.end();
    }

    void push_recent(double h1) {
        recent_.push_back(h1);
        if (recent_.size() > 10) recent_.pop_front();
    }

    void record(double t, double h) {
        const RadialField u(grid_, u_);
        traj_.times.push_back(t);
        traj_.dts.push_back(h);
        traj_.reports.push_back(energy(u, traj_.params));
        traj_.flow.push_back(stepper_.flow(u_));
        if (is_snapshot_time(t) && traj_.snapshots.size() < kMaxSnapshots) {
            traj_.snapshots.push_back({t, u});
        }
    }

    void dt_collapse(double t) {
        const bool growing = recent_.size() >= 2 && recent_.back() > recent_.front();
        if (growing) {
            traj_.outcome = Outcome::blowup;
            traj_.t_detect = t;
            traj_.diagnostic += "step size collapsed below dt_min while H^1 was growing; ";
        } else {
            traj_.outcome = Outcome::undecided;
            traj_.diagnostic += "step size collapsed below dt_min without norm growth; ";
        }
    }

    // Small relative to the start and nonincreasing over the last decade of recorded time.
    bool dissipated() const {
        const auto& r = traj_.reports;
        if (r.back().h1_sq >= cfg_.dissipation_threshold * h1_0_) return false;
        const double t_last = traj_.times.back();
        const double slack = 10.0 * cfg_.tolerance;
        std::size_t k = traj_.times.size() - 1;
        while (k > 0 && traj_.times[k - 1] >= 0.1 * t_last) --k;
        if (k > 0) --k;
        for (std::size_t i = k; i + 1 < r.size(); ++i) {
            if (r[i + 1].h1_sq > r[i].h1_sq * (1.0 + slack)) return false;
        }
        return true;
    }

    Trajectory finish() {
        traj_.recent_h1.assign(recent_.begin(), recent_.end());
        return std::move(traj_);
    }

    SolverConfig cfg_;
    Stepper stepper_;
    GridPtr grid_;
    std::vector<double> u_;
    std::vector<double> snaps_;
    std::deque<double> recent_;
    double h1_0_ = 0.0;
    Trajectory traj_;
};

std::size_t index_of_time(const Trajectory& traj, double t, const char* field) {
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (std::abs(traj.times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    }
    throw ValidationError(field, "time is not a recorded time of the trajectory");
}

}  // namespace

Trajectory run(const RadialField& u0, const ProblemParams& params, const SolverConfig& config) {
    config.validate();
    if (u0.grid().d != params.d) throw ValidationError("u0", "field built for another dimension");
    return Runner(u0, params, config).run();
}

double energy_balance_residual(const Trajectory& traj, double t1, double t2) {
    if (traj.times.size() < 2) throw ValidationError("trajectory", "need at least two recorded times");
    if (!(t1 < t2)) throw ValidationError("t2", "need t1 < t2");
    const std::size_t a = index_of_time(traj, t1, "t1");
    const std::size_t b = index_of_time(traj, t2, "t2");
    double dissipation = 0.0;
    double work = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        const double h = traj.times[i + 1] - traj.times[i];
        dissipation += 0.5 * h * (traj.flow[i].dissipation + traj.flow[i + 1].dissipation);
        work += 0.5 * h * (traj.flow[i].work + traj.flow[i + 1].work);
    }
    const double d1 = traj.flow[a].dirichlet;
    const double d2 = traj.flow[b].dirichlet;
    return std::abs(d2 + 2.0 * dissipation - d1 - 2.0 * work) / d1;
}

double duhamel_residual(const Trajectory& traj, const RadialField& u0, double t) {
    if (t == 0.0) return 0.0;
    std::vector<const Snapshot*> used;
    for (const auto& s : traj.snapshots) {
        if (s.t <= t * (1.0 + 1e-12)) used.push_back(&s);
    }
    if (used.size() < 2 || used.front()->t != 0.0 ||
        std::abs(used.back()->t - t) > 1e-12 * std::max(1.0, t)) {
        throw ValidationError("snapshots", "need snapshots at 0 and t covering [0, t]");
    }
    const Stepper nl(traj.params, u0.grid_ptr(), traj.config.boundary, traj.config.nonlinear);
    const auto freqs = dual_frequencies(u0.grid());
    std::vector<double> sum = heat_propagate(u0, t, freqs).data();
    for (std::size_t k = 0; k < used.size(); ++k) {
        double w = 0.0;
        if (k > 0) w += 0.5 * (used[k]->t - used[k - 1]->t);
        if (k + 1 < used.size()) w += 0.5 * (used[k + 1]->t - used[k]->t);
        std::vector<double> nu;
        nl.nonlinearity(used[k]->u.data(), nu);
        const auto prop = heat_propagate(RadialField(u0.grid_ptr(), std::move(nu)),
                                         std::max(0.0, t - used[k]->t), freqs);
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += w * prop[j];
    }
    const auto& ut = used.back()->u;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < sum.size(); ++j) {
        const double e = ut[j] - sum[j];
        num += e * e * ut.grid().weights[j];
        den += ut[j] * ut[j] * ut.grid().weights[j];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

LyapunovReport lyapunov_check(const Trajectory& traj) {
    LyapunovReport rep;
    const auto& r = traj.reports;
    if (r.empty()) return rep;
    const double limit = 0.25 * r.front().h1_sq;
    std::size_t k = 0;
    while (k < r.size() && !(r[k].h1_sq < limit)) ++k;
    if (k >= r.size()) {
        rep.start_time = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.start_time = traj.times[k];
    for (std::size_t i = k; i + 1 < r.size(); ++i) {
        ++rep.checked;
        const double inc = (r[i + 1].h1_sq - r[i].h1_sq) / r[i].h1_sq;
        if (inc > 0.0) {
            ++rep.increases;
            rep.max_increase = std::max(rep.max_increase, inc);
        }
    }
    return rep;
}

}  // namespace hsplab
