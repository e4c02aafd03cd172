#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "hsplab/bessel.hpp"
#include "hsplab/corpus.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/grid.hpp"
#include "hsplab/initial_data.hpp"
#include "hsplab/lorentz.hpp"
#include "hsplab/operators.hpp"
#include "hsplab/params.hpp"
#include "hsplab/spectral.hpp"

using namespace hsplab;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

GridPtr grid5(std::size_t n = 2048, double r_max = 40.0) {
    return make_grid(make_params(5, 1.0), n, r_max);
}
}  // namespace

TEST_CASE("derived exponents for d = 5, gamma = 1") {
    const ProblemParams p = make_params(5, 1.0);
    CHECK(p.p_star == Approx(8.0 / 3.0));
    CHECK(p.q_c == Approx(10.0 / 3.0));
    CHECK(p.surface_area == Approx(8.0 * pi * pi / 3.0));
    CHECK(p.regime_threshold == Approx(6.0));
    CHECK(p.bootstrap_ratio == Approx(4.0 / 3.0));
    CHECK(p.algebraic_regime());
    CHECK_FALSE(make_params(8, 1.0).algebraic_regime());
    CHECK(make_params(6, 1.0).bootstrap_ratio == Approx(1.0));
}

TEST_CASE("gamma = 0 reduces p* to the Sobolev exponent") {
    const ProblemParams p = make_params(7, 0.0);
    CHECK(p.p_star == Approx(p.q_c));
}

TEST_CASE("surface area matches |S^{d-1}| = d |B_1|") {
    for (int d = 3; d <= 10; ++d) {
        CHECK(make_params(d, 0.5).surface_area == Approx(d * unit_ball_volume(d)));
    }
    CHECK(unit_ball_volume(3) == Approx(4.0 * pi / 3.0));
}

TEST_CASE("parameter validation names the field") {
    try {
        make_params(5, 2.0);
        FAIL("gamma = 2 accepted");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "gamma");
        CHECK(std::string(e.what()).find("[0, 2)") != std::string::npos);
    }
    CHECK_THROWS_AS(make_params(2, 1.0), ValidationError);
    CHECK_THROWS_AS(make_params(5, -0.1), ValidationError);
    CHECK_THROWS_AS(make_params(5, std::nan("")), ValidationError);
}

TEST_CASE("grid geometry") {
    const GridPtr g = grid5(256, 8.0);
    CHECK(g->dr == Approx(8.0 / 256));
    CHECK(g->nodes.front() == Approx(0.5 * g->dr));
    CHECK(g->nodes.back() == Approx(8.0 - 0.5 * g->dr));
    double vol = 0.0;
    for (double v : g->cell_volumes) vol += v;
    CHECK(vol == Approx(unit_ball_volume(5) * std::pow(8.0, 5)).epsilon(1e-12));
    CHECK_THROWS_AS(make_grid(make_params(5, 1.0), 8, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(make_params(5, 1.0), 64, 0.0), ValidationError);
}

TEST_CASE("midpoint quadrature of a Gaussian") {
    const GridPtr g = grid5();
    const RadialField u = RadialField::sample(g, [](double r) { return std::exp(-r * r); });
    CHECK(radial_integral(u) == Approx(std::pow(pi, 2.5)).epsilon(1e-6));
}

TEST_CASE("fields reject non-finite samples and mismatched lengths") {
    const GridPtr g = grid5(64, 4.0);
    std::vector<double> v(64, 1.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(RadialField(g, v), NumericalError);
    CHECK_THROWS_AS(RadialField(g, std::vector<double>(10, 0.0)), NumericalError);
    const RadialField a = RadialField::sample(g, [](double r) { return r; });
    CHECK(a.plus(a, -1.0)[10] == 0.0);
    CHECK(a.scaled(2.0)[5] == Approx(2.0 * a[5]));
    CHECK(a.times(a)[7] == Approx(a[7] * a[7]));
}

TEST_CASE("Bessel function against std::cyl_bessel_j") {
    for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
        for (double z : {0.0, 0.3, 1.0, 5.0, 11.9, 12.1, 20.0, 75.0, 400.0}) {
            CHECK(bessel_j(nu, z) == Approx(std::cyl_bessel_j(nu, z)).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("radial kernel value at the origin and its Bessel form") {
    for (int d : {3, 5, 8}) {
        const RadialKernel k(d);
        const double nu = 0.5 * d - 1.0;
        CHECK(k(0.0) == Approx(1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0))));
        for (double z : {0.7, 3.0, 30.0}) {
            CHECK(k(z) == Approx(std::cyl_bessel_j(nu, z) / std::pow(z, nu)).epsilon(1e-9).scale(1e-3));
        }
    }
}

TEST_CASE("finite-volume Laplacian is exact on r^2") {
    const GridPtr g = grid5(128, 4.0);
    const RadialLaplacian lap(*g, OuterBoundary::dirichlet);
    std::vector<double> u(g->n);
    for (std::size_t j = 0; j < g->n; ++j) u[j] = g->nodes[j] * g->nodes[j];
    const auto lu = lap.apply(u);
    for (std::size_t j = 0; j + 1 < g->n; ++j) CHECK(lu[j] == Approx(10.0).epsilon(1e-10));
}

TEST_CASE("Laplacian is symmetric in the cell-volume inner product") {
    const GridPtr g = grid5(200, 6.0);
    for (auto bc : {OuterBoundary::dirichlet, OuterBoundary::harmonic}) {
        const RadialLaplacian lap(*g, bc);
        std::vector<double> a(g->n), b(g->n);
        for (std::size_t j = 0; j < g->n; ++j) {
            a[j] = std::exp(-g->nodes[j]);
            b[j] = std::cos(g->nodes[j]);
        }
        CHECK(volume_dot(*g, lap.apply(a), b) == Approx(volume_dot(*g, a, lap.apply(b))));
        CHECK(volume_dot(*g, lap.apply(a), a) < 0.0);
    }
}

TEST_CASE("shifted tridiagonal solve inverts (alpha + beta L)") {
    const GridPtr g = grid5(300, 10.0);
    const RadialLaplacian lap(*g, OuterBoundary::harmonic);
    std::vector<double> rhs(g->n), x;
    for (std::size_t j = 0; j < g->n; ++j) rhs[j] = std::sin(0.1 * static_cast<double>(j)) + 0.5;
    solve_shifted(lap, 1.0, -0.05, rhs, x);
    const auto lx = lap.apply(x);
    for (std::size_t j = 0; j < g->n; ++j) CHECK(x[j] - 0.05 * lx[j] == Approx(rhs[j]).epsilon(1e-10));
    RadialLaplacian zero = lap;
    std::fill(zero.diag.begin(), zero.diag.end(), 0.0);
    std::fill(zero.upper.begin(), zero.upper.end(), 0.0);
    CHECK_THROWS_AS(solve_shifted(zero, 0.0, 1.0, rhs, x), NumericalError);
}

TEST_CASE("singular cell measures integrate |x|^-a exactly") {
    const GridPtr g = grid5(100, 3.0);
    const auto m = singular_cell_measure(*g, 1.0);
    double total = 0.0;
    for (double v : m) total += v;
    CHECK(total == Approx(g->surface_area * std::pow(3.0, 4) / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(singular_cell_measure(*g, 5.0), ValidationError);
}

TEST_CASE("decreasing rearrangement is equimeasurable") {
    const GridPtr g = grid5(512, 10.0);
    const RadialField u = RadialField::sample(
        g, [](double r) { return std::sin(2.0 * r) * std::exp(-0.3 * r * r) + 0.1 * std::exp(-r); });
    const LorentzSample s = decreasing_rearrangement(u);
    for (std::size_t k = 1; k < s.levels.size(); ++k) CHECK(s.levels[k] <= s.levels[k - 1]);
    double mass = 0.0;
    for (double w : g->weights) mass += w;
    CHECK(s.total_measure() == Approx(mass).epsilon(1e-12));
    for (double q : {1.0, 2.0, 10.0 / 3.0}) {
        double direct = 0.0;
        for (std::size_t j = 0; j < g->n; ++j) direct += std::pow(std::abs(u[j]), q) * g->weights[j];
        double rearranged = 0.0;
        for (std::size_t k = 0; k < s.levels.size(); ++k) {
            rearranged += std::pow(s.levels[k], q) * (s.edges[k + 1] - s.edges[k]);
        }
        CHECK(rearranged == Approx(direct).epsilon(1e-12));
        CHECK(lorentz_norm(u, q, q) == Approx(std::pow(direct, 1.0 / q)).epsilon(1e-10));
    }
    CHECK(distribution_function(u, 0.0) == Approx(s.total_measure()));
    CHECK(distribution_function(u, 10.0) == 0.0);
}

TEST_CASE("Lorentz norms are monotone in the second index") {
    const GridPtr g = grid5(512, 10.0);
    const RadialField u = RadialField::sample(g, [](double r) { return std::exp(-r); });
    const double q = 3.0;
    CHECK(lorentz_norm(u, q, 1.0) >= lorentz_norm(u, q, 2.0));
    CHECK(lorentz_norm(u, q, 2.0) >= lorentz_norm(u, q, 3.0));
    CHECK(lorentz_norm(u, q, 3.0) >= lorentz_norm(u, q, INFINITY));
    CHECK_THROWS_AS(lorentz_norm(u, 0.0, 2.0), ValidationError);
}

TEST_CASE("weak norm of |x|^-1 on the unit ball") {
    // f*(t) = (t/|B_1|)^{-1/5} on t < |B_1|, so t^{1/5} f*(t) is the constant
    // |B_1|^{1/5} on the whole support.
    const GridPtr g = grid5(2048, 2.0);
    const RadialField u = RadialField::sample(g, [](double r) { return r <= 1.0 ? 1.0 / r : 0.0; });
    const double exact = std::pow(unit_ball_volume(5), 0.2);
    const LorentzSample s = decreasing_rearrangement(u);
    // The plateau: sampled levels at their measure points, away from the first cell.
    for (std::size_t k = 10; k < 1000; k += 97) {
        CHECK(std::pow(s.measure_points[k], 0.2) * s.levels[k] == Approx(exact).epsilon(2e-2));
    }
    // The sup also sees the first cell, whose level overshoots the plateau.
    const double weak = lorentz_norm(u, 5.0, INFINITY);
    CHECK(weak >= exact * (1.0 - 2e-2));
    CHECK(weak <= 1.5 * exact);
}

TEST_CASE("Lebesgue norms") {
    const GridPtr g = grid5();
    const RadialField u = RadialField::sample(g, [](double r) { return std::exp(-r * r); });
    CHECK(lebesgue_norm(u, 2.0) == Approx(std::pow(pi / 2.0, 1.25)).epsilon(1e-6));
    CHECK(lebesgue_norm(u, INFINITY) == Approx(std::exp(-g->nodes[0] * g->nodes[0])));
}

TEST_CASE("data descriptors validate before sampling") {
    const ProblemParams p = make_params(5, 1.0);
    CHECK_NOTHROW(validate(Gaussian{1.0, 2.0}, p));
    CHECK_THROWS_AS(validate(Gaussian{1.0, 0.0}, p), ValidationError);
    CHECK_THROWS_AS(validate(FrequencyProfile{-3.0, 0.0, 1.0}, p), ValidationError);
    try {
        validate(FrequencyProfile{-3.5, 1.0, 1.0}, p);
        FAIL("profile on the admissibility line accepted");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "data.s");
    }
    CHECK_NOTHROW(validate(FrequencyProfile{-3.4, 1.0, 1.0}, p));
    CHECK(describe(ScaledGroundState{0.5}).find("0.5") != std::string::npos);
}

TEST_CASE("sampled Gaussian and scaled ground state") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = grid5(256, 10.0);
    const RadialField u = sample_initial_data(Gaussian{3.0, 2.0}, p, g);
    for (std::size_t j = 0; j < g->n; j += 17) {
        CHECK(u[j] == Approx(3.0 * std::exp(-std::pow(g->nodes[j] / 2.0, 2))));
    }
    const RadialField w = sample_initial_data(ScaledGroundState{0.5}, p, g);
    // W(0) = ((d - gamma)(d - 2))^{(d-2)/(2(2-gamma))} = 12^{3/2}.
    CHECK(w[0] / 0.5 == Approx(std::pow(12.0, 1.5) * std::pow(1.0 + g->nodes[0], -3.0)));
}

TEST_CASE("frequency profile reproduces its spectrum") {
    const ProblemParams p = make_params(5, 1.0);
    const GridPtr g = make_grid(p, 2048, 200.0);
    const RadialField u = sample_initial_data(FrequencyProfile{-2.0, 1.0, 0.5}, p, g);
    const auto s = hankel_transform(u, make_frequencies(5, 0.01, 300));
    for (std::size_t k : {20u, 50u, 90u}) {
        const double rho = s.frequencies().rho[k];
        CHECK(s.values()[k] == Approx(0.5 * std::pow(rho, -2.0)).epsilon(3e-2));
    }
    CHECK(std::abs(s.values()[250]) < 1e-2 * 0.5);
}

TEST_CASE("corpus is seeded and deterministic") {
    const GridPtr g = grid5(512, 40.0);
    const auto a = random_corpus(g, 20, 11);
    const auto b = random_corpus(g, 20, 11);
    const auto c = random_corpus(g, 20, 12);
    REQUIRE(a.size() == 20);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].describe() == b[i].describe());
        CHECK(a[i].field.data() == b[i].field.data());
        differs = differs || a[i].describe() != c[i].describe();
        CHECK(a[i].bumps.size() >= 3);
        CHECK(a[i].bumps.size() <= 6);
        for (const Bump& bump : a[i].bumps) {
            CHECK(bump.center >= 0.0);
            CHECK(bump.center <= 20.0);
            CHECK(bump.width >= 0.2);
            CHECK(bump.width <= 3.0);
            CHECK(std::abs(bump.amplitude) <= 2.0);
        }
    }
    CHECK(differs);
}
