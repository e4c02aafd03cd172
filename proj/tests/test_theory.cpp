#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hsplab/errors.hpp"
#include "hsplab/theory.hpp"

using namespace hsplab;
using doctest::Approx;

namespace {
Trajectory synthetic(const std::vector<double>& times, auto h) {
    Trajectory t;
    t.outcome = Outcome::dissipative;
    for (double s : times) {
        FunctionalReport r;
        r.h1_sq = h(s);
        t.times.push_back(s);
        t.reports.push_back(r);
    }
    return t;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}
}  // namespace

TEST_CASE("rate predictor cases") {
    const RatePrediction a = rate_predictor(make_params(5, 1.0), 1.0);
    CHECK(a.regime == Regime::algebraic);
    CHECK(a.bootstrap_case == BootstrapCase::ratio_gt_1);
    CHECK(a.exponent == 1.0);

    const RatePrediction b = rate_predictor(make_params(5, 1.0), -2.0);
    CHECK(b.exponent == Approx(0.5));

    // 4(2 - gamma)/(d - 2) = 1 exactly at d = 6, gamma = 1.
    const RatePrediction c = rate_predictor(make_params(6, 1.0), 0.0);
    CHECK(c.bootstrap_case == BootstrapCase::ratio_eq_1);
    CHECK(c.regime == Regime::algebraic);

    const RatePrediction e = rate_predictor(make_params(8, 1.0), 1.0);
    CHECK(e.bootstrap_case == BootstrapCase::ratio_lt_1);
    CHECK(e.regime == Regime::logarithmic);
    CHECK(e.exponent == 2.0);

    // The regime switches where d crosses 10 - 4 gamma.
    for (double gamma : {0.25, 0.75, 1.25, 1.75}) {
        for (int d = 5; d <= 12; ++d) {
            const bool log_expected = d > 10.0 - 4.0 * gamma + 1e-12;
            CHECK((rate_predictor(make_params(d, gamma), 0.0).regime == Regime::logarithmic) ==
                  log_expected);
        }
    }
    CHECK_THROWS_AS(rate_predictor(make_params(5, 1.0), -2.5), ValidationError);
    CHECK_THROWS_AS(rate_predictor(make_params(4, 1.0), 0.0), ValidationError);
}

TEST_CASE("envelopes start at one") {
    const RatePrediction a = rate_predictor(make_params(5, 1.0), -2.0);
    CHECK(a.envelope(0.0) == 1.0);
    CHECK(a.envelope(3.0) == Approx(0.5));
    const RatePrediction l = rate_predictor(make_params(8, 1.0), 0.0);
    CHECK(l.envelope(0.0) == Approx(1.0));
    CHECK(l.envelope(10.0) == Approx(std::pow(std::log(std::numbers::e + 10.0), -2.0)));
}

TEST_CASE("power-law fits recover synthetic exponents") {
    const auto times = linspace(1.0, 100.0, 64);
    std::vector<double> h;
    for (double t : times) h.push_back(3.0 * std::pow(1.0 + t, -0.7));
    const PowerFit f = fit_power_law(times, h, {1.0, 100.0}, 1.0);
    CHECK(f.exponent == Approx(0.7).epsilon(1e-12));
    CHECK(f.residual < 1e-12);
    CHECK(f.samples == 64);

    const RatePrediction pred = rate_predictor(make_params(5, 1.0), -2.0);
    const DecayReport rep = fit_decay_exponent(times, h, {1.0, 100.0}, pred);
    CHECK(rep.fitted_exponent == Approx(0.7));
    CHECK(rep.bound_satisfied);

    std::vector<double> slow;
    for (double t : times) slow.push_back(std::pow(1.0 + t, -0.3));
    CHECK_FALSE(fit_decay_exponent(times, slow, {1.0, 100.0}, pred).bound_satisfied);

    const auto few = linspace(1.0, 100.0, 15);
    std::vector<double> hf(few.size(), 1.0);
    CHECK_THROWS_AS(fit_decay_exponent(few, hf, {1.0, 100.0}, pred), ValidationError);
}

TEST_CASE("trajectory fits reject blowup") {
    auto traj = synthetic(linspace(0.0, 10.0, 40), [](double t) { return 1.0 / (1.0 + t); });
    const RatePrediction pred = rate_predictor(make_params(5, 1.0), 1.0);
    CHECK(fit_decay_exponent(traj, {1.0, 10.0}, pred).fitted_exponent == Approx(1.0));
    traj.outcome = Outcome::blowup;
    CHECK_THROWS_AS(fit_decay_exponent(traj, {1.0, 10.0}, pred), ValidationError);
}

TEST_CASE("logarithmic envelope diagnostics") {
    const auto times = linspace(0.0, 100.0, 101);
    const auto log_sq = synthetic(times, [](double t) {
        return std::pow(std::log(std::numbers::e + t), -2.0);
    });
    CHECK(log_envelope_ratio(log_sq, {10.0, 100.0}) == Approx(1.0));
    CHECK(preliminary_decay_holds(log_sq, {10.0, 100.0}));
    const auto flat = synthetic(times, [](double) { return 1.0; });
    CHECK(log_envelope_ratio(flat, {10.0, 100.0}) > 1.5);
    CHECK_FALSE(preliminary_decay_holds(flat, {10.0, 100.0}));
    CHECK_THROWS_AS(log_envelope_ratio(flat, {200.0, 300.0}), ValidationError);
}

TEST_CASE("heat decay series of a Gaussian") {
    const int d = 5;
    const GridPtr g = make_grid(make_params(d, 1.0), 2048, 40.0);
    const RadialField u = RadialField::sample(g, [](double r) { return std::exp(-r * r); });
    const std::vector<double> times{0.0, 1.0, 10.0, 100.0};
    const auto l2 = heat_decay_series(u, times, 0.0);
    const auto h1 = linear_part_decay(u, times);
    const double sigma = g->surface_area;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        CHECK(l2[i] == Approx(std::pow(std::numbers::pi / 2.0, 0.5 * d) *
                              std::pow(1.0 + 4.0 * t, -0.5 * d))
                           .epsilon(1e-3));
        // sigma 2^{-d} int rho^{d+1} e^{-a rho^2}, a = 1/2 + 2t
        const double a = 0.5 + 2.0 * t;
        const double exact = sigma * std::pow(2.0, -d) * std::tgamma(0.5 * (d + 2)) /
                             (2.0 * std::pow(a, 0.5 * (d + 2)));
        CHECK(h1[i] == Approx(exact).epsilon(1e-3));
    }
}

TEST_CASE("Kato admissible window") {
    const ProblemParams p = make_params(5, 1.0);
    // 1/q in (1/q_c - 1/(d (p* - 1)), 1/q_c) = (0.18, 0.3)
    CHECK(kato_admissible(p, 4.0));
    CHECK(kato_admissible(p, 5.5));
    CHECK_FALSE(kato_admissible(p, 3.0));
    CHECK_FALSE(kato_admissible(p, 6.0));
    CHECK_THROWS_AS(kato_weighted_norm(Trajectory{}, 1.0), ValidationError);
}

TEST_CASE("Fourier splitting preconditions") {
    Trajectory t;
    t.params = make_params(5, 1.0);
    CHECK_THROWS_AS(fourier_splitting_check(t, 3.0, 1.0), ValidationError);
    CHECK_THROWS_AS(fourier_splitting_check(t, 4.0, 1.0), ValidationError);  // no snapshots
    SplittingVerdict v;
    v.m = 4.0;
    v.c_tilde = 1.0;
    CHECK(v.radius(3.0) == Approx(1.0));
}
