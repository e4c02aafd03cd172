#include "hsplab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hsplab/errors.hpp"
#include "hsplab/lorentz.hpp"
#include "hsplab/spectral.hpp"

namespace hsplab {

namespace {

struct LineFit {
    double slope = 0.0;
    double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (my + f.slope * (x[i] - mx));
        rss += e * e;
    }
    f.rms = std::sqrt(rss / n);
    return f;
}

double log_e(double t) { return std::log(std::numbers::e + t); }

std::vector<std::size_t> window_indices(const std::vector<double>& times,
                                        std::pair<double, double> window) {
    const double tol = 1e-12 * std::max(1.0, window.second);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= window.first - tol && times[i] <= window.second + tol) idx.push_back(i);
    }
    return idx;
}

std::vector<double> recorded_h1(const Trajectory& traj) {
    std::vector<double> h;
    h.reserve(traj.reports.size());
    for (const auto& r : traj.reports) h.push_back(r.h1_sq);
    return h;
}

}  // namespace

const char* to_string(Regime r) {
    return r == Regime::algebraic ? "algebraic" : "logarithmic";
}

const char* to_string(BootstrapCase c) {
    switch (c) {
        case BootstrapCase::ratio_gt_1: return "ratio_gt_1";
        case BootstrapCase::ratio_eq_1: return "ratio_eq_1";
        case BootstrapCase::ratio_lt_1: return "ratio_lt_1";
    }
    return "ratio_gt_1";
}

double RatePrediction::envelope(double t) const {
    if (regime == Regime::algebraic) return std::pow(1.0 + t, -exponent);
    return std::pow(log_e(t), -exponent);
}

RatePrediction rate_predictor(const ProblemParams& params, double q_star) {
    if (params.d < 5) throw ValidationError("params.d", "decay rates need d >= 5");
    const double half_d = 0.5 * params.d;
    if (!(q_star > -half_d) || !std::isfinite(q_star)) {
        std::ostringstream os;
        os << "q_star = " << q_star << " must exceed -d/2 = " << -half_d;
        throw ValidationError("q_star", os.str());
    }
    RatePrediction p;
    p.q_star = q_star;
    const double ratio = params.bootstrap_ratio;
    if (std::abs(ratio - 1.0) <= 1e-12) {
        p.bootstrap_case = BootstrapCase::ratio_eq_1;
    } else if (ratio > 1.0) {
        p.bootstrap_case = BootstrapCase::ratio_gt_1;
    } else {
        p.bootstrap_case = BootstrapCase::ratio_lt_1;
    }
    if (p.bootstrap_case == BootstrapCase::ratio_lt_1) {
        p.regime = Regime::logarithmic;
        p.exponent = 2.0;
    } else {
        p.regime = Regime::algebraic;
        p.exponent = std::min(half_d + q_star, 1.0);
    }
    return p;
}

PowerFit fit_power_law(const std::vector<double>& times, const std::vector<double>& h,
                       std::pair<double, double> window, double offset) {
    if (times.size() != h.size()) throw ValidationError("times", "times and values differ in length");
    const auto idx = window_indices(times, window);
    if (idx.size() < 2) throw ValidationError("fit_window", "need at least two samples in the window");
    std::vector<double> x, y;
    for (std::size_t i : idx) {
        if (!(h[i] > 0.0) || !(times[i] + offset > 0.0)) {
            throw ValidationError("values", "power-law fit needs positive samples");
        }
        x.push_back(std::log(times[i] + offset));
        y.push_back(std::log(h[i]));
    }
    const auto f = least_squares(x, y);
    return {-f.slope, f.rms, idx.size()};
}

DecayReport fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& h,
                               std::pair<double, double> window,
                               const RatePrediction& prediction) {
    if (times.size() != h.size()) throw ValidationError("trajectory", "times and values differ in length");
    if (!(window.first < window.second) || window.first < 0.0) {
        throw ValidationError("fit_window", "need 0 <= t_lo < t_hi");
    }
    const auto idx = window_indices(times, window);
    if (idx.size() < 16) {
        throw ValidationError("fit_window", "need at least 16 samples in the window, have " +
                                                std::to_string(idx.size()));
    }
    std::vector<double> x, xl, y;
    for (std::size_t i : idx) {
        if (!(h[i] > 0.0)) throw ValidationError("trajectory", "values must be positive to fit a rate");
        x.push_back(std::log1p(times[i]));
        xl.push_back(std::log(log_e(times[i])));
        y.push_back(std::log(h[i]));
    }
    DecayReport rep;
    rep.fit_window = window;
    rep.prediction = prediction;
    rep.samples = idx.size();
    const auto alg = least_squares(x, y);
    rep.fitted_exponent = -alg.slope;
    rep.fit_residual = alg.rms;
    rep.log_fit_exponent = -least_squares(xl, y).slope;
    const std::size_t first = idx.front();
    const double c = h[first] / prediction.envelope(times[first]);
    rep.bound_satisfied = true;
    for (std::size_t i : idx) {
        if (h[i] > c * prediction.envelope(times[i]) * (1.0 + 1e-9)) {
            rep.bound_satisfied = false;
            break;
        }
    }
    return rep;
}

DecayReport fit_decay_exponent(const Trajectory& traj, std::pair<double, double> window,
                               const RatePrediction& prediction) {
    if (traj.outcome == Outcome::blowup) {
        throw ValidationError("trajectory", "decay rates are undefined for a blowup run");
    }
    const auto h = recorded_h1(traj);
    if (traj.outcome == Outcome::undecided) {
        const auto idx = window_indices(traj.times, window);
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            if (h[idx[k + 1]] > h[idx[k]]) {
                throw ValidationError("trajectory",
                                      "run is neither dissipative nor decaying over the window");
            }
        }
    }
    return fit_decay_exponent(traj.times, h, window, prediction);
}

std::pair<double, double> default_fit_window(const Trajectory& traj) {
    const double t_end = traj.t_final();
    return {0.1 * t_end, t_end};
}

double log_envelope_ratio(const Trajectory& traj, std::pair<double, double> window) {
    const auto idx = window_indices(traj.times, window);
    if (idx.empty()) throw ValidationError("window", "no recorded samples in the window");
    auto value = [&](std::size_t i) {
        const double l = log_e(traj.times[i]);
        return traj.reports[i].h1_sq * l * l;
    };
    const double base = value(idx.front());
    double top = base;
    for (std::size_t i : idx) top = std::max(top, value(i));
    return top / base;
}

bool preliminary_decay_holds(const Trajectory& traj, std::pair<double, double> window) {
    RatePrediction log_rate;
    log_rate.regime = Regime::logarithmic;
    log_rate.exponent = 2.0;
    const auto idx = window_indices(traj.times, window);
    if (idx.empty()) throw ValidationError("window", "no recorded samples in the window");
    const std::size_t first = idx.front();
    const double c = traj.reports[first].h1_sq / log_rate.envelope(traj.times[first]);
    for (std::size_t i : idx) {
        if (traj.reports[i].h1_sq > c * log_rate.envelope(traj.times[i]) * (1.0 + 1e-9)) return false;
    }
    return true;
}

std::vector<double> heat_decay_series(const RadialField& u0, const std::vector<double>& times,
                                      double power) {
    const auto& g = u0.grid();
    const double band = std::numbers::pi / g.dr;
    const std::size_t count = std::max<std::size_t>(1024, g.n / 2);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) throw ValidationError("times", "times must be nonnegative");
        FrequencyPtr freqs;
        if (t == 0.0) {
            freqs = dual_frequencies(g);
        } else {
            double upper = band;
            const double needed = 10.0 / std::sqrt(t);
            while (0.5 * upper >= needed) upper *= 0.5;
            freqs = upper == band ? dual_frequencies(g) : low_frequencies(g.d, upper, count);
        }
        const auto s = hankel_transform(u0, freqs).weighted(power).heat(t);
        out.push_back(s.l2_norm_sq());
    }
    return out;
}

std::vector<double> linear_part_decay(const RadialField& u0, const std::vector<double>& times) {
    return heat_decay_series(u0, times, 1.0);
}

double SplittingVerdict::radius(double t) const {
    return std::sqrt(m / ((1.0 + t) * c_tilde));
}

SplittingVerdict fourier_splitting_check(const Trajectory& traj, double m, double q_star) {
    const double half_d = 0.5 * traj.params.d;
    if (!(m > std::max(half_d + q_star, 1.0))) {
        std::ostringstream os;
        os << "m = " << m << " must exceed max{d/2 + q*, 1} = " << std::max(half_d + q_star, 1.0);
        throw ValidationError("splitting_m", os.str());
    }
    if (traj.snapshots.size() < 2) {
        throw ValidationError("snapshots", "splitting check needs at least two snapshots");
    }
    SplittingVerdict v;
    v.m = m;
    const double t_first = traj.snapshots.front().t;
    const double t_last = traj.snapshots.back().t;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_first || traj.times[i] > t_last) continue;
        const auto& f = traj.flow[i];
        if (f.dissipation > 0.0) v.margin = std::max(v.margin, f.work / f.dissipation);
    }
    v.degenerate = v.margin >= 0.5;
    v.c_tilde = std::max(1.0, 2.0 * (1.0 - v.margin));

    const int d = traj.params.d;
    auto g = [&](double t) { return std::pow(1.0 + t, m); };
    auto dg = [&](double t) { return m * std::pow(1.0 + t, m - 1.0); };
    std::vector<double> h, low;
    for (const auto& s : traj.snapshots) {
        h.push_back(h1_norm_sq(s.u));
        const double radius = v.radius(s.t);
        const auto near = hankel_transform(s.u, low_frequencies(d, radius, 64));
        low.push_back(lowfreq_h1_mass(near, radius));
    }
    v.holds = true;
    v.worst_relative_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
        const double t0 = traj.snapshots[k].t;
        const double t1 = traj.snapshots[k + 1].t;
        SplittingInterval iv;
        iv.t0 = t0;
        iv.t1 = t1;
        iv.lhs = (g(t1) * h[k + 1] - g(t0) * h[k]) / (t1 - t0);
        iv.rhs = 0.5 * (dg(t0) * low[k] + dg(t1) * low[k + 1]);
        iv.slack = iv.rhs - iv.lhs;
        iv.scale = 0.5 * (dg(t0) * h[k] + dg(t1) * h[k + 1]);
        iv.holds = iv.slack >= -kSplittingTolerance * iv.scale;
        const double rel = iv.scale > 0.0 ? iv.slack / iv.scale : 0.0;
        v.worst_relative_slack = std::min(v.worst_relative_slack, rel);
        v.holds = v.holds && iv.holds;
        v.intervals.push_back(iv);
    }
    return v;
}

bool kato_admissible(const ProblemParams& params, double q) {
    const double inv = 1.0 / q;
    const double upper = 1.0 / params.q_c;
    const double lower = upper - 1.0 / (params.d * (params.p_star - 1.0));
    return inv > lower && inv < upper;
}

KatoSeries kato_weighted_norm(const Trajectory& traj, double q) {
    if (!(q > 1.0)) throw ValidationError("kato_q", "q must exceed 1");
    KatoSeries s;
    s.q = q;
    s.admissible = kato_admissible(traj.params, q);
    const double power = 0.5 * traj.params.d * (1.0 / traj.params.q_c - 1.0 / q);
    for (const auto& snap : traj.snapshots) {
        if (!(snap.t > 0.0)) continue;
        s.times.push_back(snap.t);
        s.values.push_back(std::pow(snap.t, power) * lebesgue_norm(snap.u, q));
    }
    if (s.times.size() >= 2) {
        const double t_last = s.times.back();
        s.decreasing_final_decade = true;
        for (std::size_t k = 0; k + 1 < s.times.size(); ++k) {
            if (s.times[k] < 0.1 * t_last) continue;
            if (s.values[k + 1] > s.values[k]) {
                s.decreasing_final_decade = false;
                break;
            }
        }
    }
    return s;
}

}  // namespace hsplab
