#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "hsplab/corpus.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/functionals.hpp"
#include "hsplab/lorentz.hpp"
#include "hsplab/spectral.hpp"

using namespace hsplab;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

/// int_0^inf r^k e^{-a r^2} dr
double gauss_moment(double k, double a) {
    return std::tgamma(0.5 * (k + 1.0)) / (2.0 * std::pow(a, 0.5 * (k + 1.0)));
}

/// Composite Simpson on [0, 1) after r = s / (1 - s).
double simpson_half_line(const std::function<double(double)>& f, int m = 200000) {
    auto g = [&](double s) {
        if (s >= 1.0) return 0.0;
        const double r = s / (1.0 - s);
        return f(r) / ((1.0 - s) * (1.0 - s));
    };
    const double h = 1.0 / m;
    double sum = g(0.0) + g(1.0);
    for (int i = 1; i < m; ++i) sum += g(i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

RadialField gaussian(const GridPtr& g) {
    return RadialField::sample(g, [](double r) { return std::exp(-r * r); });
}
}  // namespace

TEST_CASE("Gaussian functionals against closed forms") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const RadialField u = gaussian(g);
    const double sigma = p.surface_area;
    // |grad e^{-r^2}|^2 = 4 r^2 e^{-2 r^2}
    CHECK(h1_norm_sq(u) == Approx(4.0 * sigma * gauss_moment(6.0, 2.0)).epsilon(1e-3));
    CHECK(hs_term(u, p) ==
          Approx(sigma * gauss_moment(5.0 - 1.0 - 1.0, p.p_star)).epsilon(1e-3));
    const FunctionalReport rep = energy(u, p);
    CHECK(rep.l2_sq == Approx(std::pow(pi / 2.0, 2.5)).epsilon(1e-6));
    CHECK(rep.lqc == Approx(std::pow(sigma * gauss_moment(4.0, p.q_c), 1.0 / p.q_c)).epsilon(1e-6));
    CHECK(rep.energy == Approx(rep.h1_sq / 2.0 - rep.hs_term / p.p_star));
    CHECK(rep.nehari == Approx(rep.h1_sq - rep.hs_term));
}

TEST_CASE("closed-form ground state energy against quadrature") {
    for (auto [d, gamma] : {std::pair{5, 1.0}, std::pair{6, 0.5}, std::pair{8, 1.5}}) {
        const ProblemParams p = make_params(d, gamma);
        const double b = 2.0 - gamma;
        const double c = ground_state_value(p, 0.0);
        // W'(r) = -c (d-2) r^{b-1} (1 + r^b)^{-(d-2)/b - 1}
        const double quad = p.surface_area * simpson_half_line([&](double r) {
            if (r == 0.0) return 0.0;
            const double dw = c * (d - 2.0) * std::pow(r, b - 1.0) *
                              std::pow(1.0 + std::pow(r, b), -(d - 2.0) / b - 1.0);
            return dw * dw * std::pow(r, d - 1.0);
        });
        CHECK(ground_state_h1_exact(p) == Approx(quad).epsilon(1e-7));
    }
    CHECK(ground_state_h1_exact(make_params(5, 1.0)) == Approx(3898.3).epsilon(1e-4));
}

TEST_CASE("ground state sits on the Nehari manifold at the mountain-pass level") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const RadialField w = ground_state_field(p, g);
    const FunctionalReport rep = energy(w, p);
    CHECK(std::abs(rep.nehari) / rep.h1_sq < 1e-3);
    // E(W) = (1/2 - 1/p*) ||W||^2 = ||W||^2 / 8 when p* = 8/3.
    CHECK(rep.energy == Approx(rep.h1_sq / 8.0).epsilon(1e-3));
    CHECK(rep.h1_sq == Approx(ground_state_h1_exact(p)).epsilon(1e-3));
    CHECK(mountain_pass_energy(p, g) == Approx(ground_state_h1_exact(p) / 8.0).epsilon(1e-3));
    CHECK_THROWS_AS(ground_state_field(make_params(6, 1.0), g), ValidationError);
}

TEST_CASE("energy-critical dilation preserves h1 and the Hardy-Sobolev term") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const RadialField u = gaussian(g);
    for (double lambda : {0.5, 2.0}) {
        const RadialField v = scale_field(u, lambda);
        CHECK(h1_norm_sq(v) == Approx(h1_norm_sq(u)).epsilon(1e-2));
        CHECK(hs_term(v, p) == Approx(hs_term(u, p)).epsilon(1e-2));
        CHECK(check_hardy_sobolev(v, p) == Approx(check_hardy_sobolev(u, p)).epsilon(1e-2));
    }
    CHECK(scale_field(u, 1.0)[100] == Approx(u[100]));
    CHECK_THROWS_AS(scale_field(u, 0.0), ValidationError);
}

TEST_CASE("Hardy-Sobolev ratio is maximized by the ground state") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const double sharp = hardy_sobolev_constant(p);
    CHECK(sharp == Approx(std::pow(3898.3, -1.0 / 8.0)).epsilon(1e-4));
    CHECK(check_hardy_sobolev(ground_state_field(p, g), p) == Approx(sharp).epsilon(1e-3));
    for (const auto& s : random_corpus(g, 25)) CHECK(check_hardy_sobolev(s.field, p) < sharp);
    CHECK_THROWS_AS(check_hardy_sobolev(RadialField::zeros(g), p), ValidationError);
}

TEST_CASE("Rellich inequality") {
    CHECK(rellich_factor(5) == Approx(0.64));
    CHECK(rellich_factor(8) == Approx(16.0 / (64.0 * 16.0)));
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const Verdict v = check_rellich(gaussian(g), p);
    // d = 5: int |u|^2 / |x|^4 = sigma int e^{-2r^2} dr; Delta e^{-r^2} = (4r^2 - 10) e^{-r^2}.
    const double sigma = p.surface_area;
    CHECK(v.lhs == Approx(sigma * std::sqrt(pi / 8.0)).epsilon(1e-3));
    const double lap_sq = sigma * (16.0 * gauss_moment(8.0, 2.0) - 80.0 * gauss_moment(6.0, 2.0) +
                                   100.0 * gauss_moment(4.0, 2.0));
    CHECK(v.rhs == Approx(0.64 * lap_sq).epsilon(1e-3));
    CHECK(v.holds);
    for (const auto& s : random_corpus(g, 25)) CHECK(check_rellich(s.field, p).holds);
    CHECK_THROWS_AS(check_rellich(gaussian(make_grid(make_params(4, 1.0), 256, 10.0)),
                                  make_params(4, 1.0)),
                    ValidationError);
}

TEST_CASE("Lorentz-Holder indices are validated") {
    HolderIndices ok;
    CHECK_NOTHROW(validate_holder(ok));
    HolderIndices bad_q = ok;
    bad_q.q = 3.0;
    CHECK_THROWS_AS(validate_holder(bad_q), ValidationError);
    HolderIndices bad_r = ok;
    bad_r.r = 1.0;
    CHECK_THROWS_AS(validate_holder(bad_r), ValidationError);
    HolderIndices weak = ok;
    weak.r2 = INFINITY;
    weak.r = 4.0;
    CHECK_NOTHROW(validate_holder(weak));
    HolderIndices bounded{2.0, 2.0, INFINITY, 2.0, 2.0, 2.0};
    CHECK_THROWS_AS(validate_holder(bounded), ValidationError);
}

TEST_CASE("Lorentz-Holder with a bounded factor is the norm itself") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 1024, 20.0);
    const RadialField f = gaussian(g);
    const RadialField one = RadialField::sample(g, [](double) { return 1.0; });
    const Verdict v =
        check_lorentz_holder(f, one, HolderIndices{3.0, 2.0, INFINITY, INFINITY, 3.0, 2.0});
    CHECK(v.lhs == Approx(lorentz_norm(f, 3.0, 2.0)));
    CHECK(v.ratio == Approx(1.0 / kHolderConstant));
    const auto corpus = random_corpus(g, 20);
    for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
        CHECK(check_lorentz_holder(corpus[i].field, corpus[i + 1].field, HolderIndices{}).holds);
    }
}

TEST_CASE("critical embedding constant covers the corpus and the ground state") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const Verdict vw = check_critical_embedding(ground_state_field(p, g), p);
    CHECK(vw.holds);
    CHECK(vw.ratio > 0.9);
    for (const auto& s : random_corpus(g, 25)) CHECK(check_critical_embedding(s.field, p).holds);
    CHECK_THROWS_AS(check_critical_embedding(RadialField::zeros(g), p), ValidationError);
}

TEST_CASE("ground state h1 agrees with the spectral side") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    // Smooth cutoff on [20, 35]: a jump at r_max would feed the whole band.
    const RadialField w = RadialField::sample(g, [&](double r) {
        const double s = std::clamp((r - 20.0) / 15.0, 0.0, 1.0);
        return ground_state_value(p, r) * (1.0 - s * s * (3.0 - 2.0 * s));
    });
    const double spectral = hankel_transform(w).weighted(1.0).l2_norm_sq();
    CHECK(h1_norm_sq(w) == Approx(spectral).epsilon(1e-2));
}

TEST_CASE("Nehari sign along amplitude scalings of the ground state") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 40.0);
    const RadialField w = ground_state_field(p, g);
    CHECK(energy(w.scaled(0.5), p).nehari > 0.0);
    CHECK(energy(w.scaled(1.5), p).nehari < 0.0);
    CHECK(h1_norm_sq(RadialField::zeros(g)) == 0.0);
}
