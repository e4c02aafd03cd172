#include "hsplab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsplab/errors.hpp"
#include "hsplab/lorentz.hpp"
#include "hsplab/operators.hpp"

namespace hsplab {

namespace {

Verdict make_verdict(double lhs, double rhs, double slack) {
    Verdict v{lhs, rhs, 0.0, true};
    if (rhs > 0.0) {
        v.ratio = lhs / rhs;
        v.holds = lhs <= rhs * (1.0 + slack);
    } else {
        v.ratio = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        v.holds = lhs <= 0.0;
    }
    return v;
}

bool is_zero(const RadialField& u) {
    return std::all_of(u.values().begin(), u.values().end(), [](double x) { return x == 0.0; });
}

// Fritsch-Carlson slopes for samples on a uniform grid.
std::vector<double> monotone_slopes(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / h;
    std::vector<double> m(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] > 0.0) {
            m[k] = 2.0 / (1.0 / delta[k - 1] + 1.0 / delta[k]);
        }
    }
    auto edge = [](double d0, double d1) {
        double m0 = 0.5 * (3.0 * d0 - d1);
        if (m0 * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(m0) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m0;
    };
    m[0] = edge(delta[0], delta[1]);
    m[n - 1] = edge(delta[n - 2], delta[n - 3]);
    return m;
}

}  // namespace

double h1_norm_sq(const RadialField& u) {
    const auto& g = u.grid();
    const double dd = g.d;
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < g.n; ++j) {
        const double du = u[j + 1] - u[j];
        s += std::pow(g.face(j + 1), dd - 1.0) * du * du;
    }
    s /= g.dr;
    // harmonic exterior u_e (r_e / r)^{d-2} beyond the last node
    const double re = g.nodes[g.n - 1];
    const double ue = u[g.n - 1];
    s += (dd - 2.0) * std::pow(re, dd - 2.0) * ue * ue;
    return s * g.surface_area;
}

double hs_term(const RadialField& u, const ProblemParams& params) {
    const auto& g = u.grid();
    const auto w = singular_cell_measure(g, params.gamma);
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += std::pow(std::abs(u[j]), params.p_star) * w[j];
    const double e = g.d - params.gamma;
    const double re = g.nodes[g.n - 1];
    s += g.surface_area * std::pow(std::abs(u[g.n - 1]), params.p_star) *
         std::pow(re * re / g.r_max, e) / e;
    return s;
}

FunctionalReport energy(const RadialField& u, const ProblemParams& params) {
    FunctionalReport r;
    r.h1_sq = h1_norm_sq(u);
    r.l2_sq = radial_integral(u.times(u));
    r.lqc = lebesgue_norm(u, params.q_c);
    r.hs_term = hs_term(u, params);
    r.energy = 0.5 * r.h1_sq - r.hs_term / params.p_star;
    r.nehari = r.h1_sq - r.hs_term;
    return r;
}

double ground_state_value(const ProblemParams& params, double r) {
    const double d = params.d;
    const double a = 2.0 - params.gamma;
    const double c = std::pow((d - params.gamma) * (d - 2.0), (d - 2.0) / (2.0 * a));
    return c * std::pow(1.0 + std::pow(r, a), -(d - 2.0) / a);
}

double ground_state_h1_exact(const ProblemParams& params) {
    const double d = params.d;
    const double b = 2.0 - params.gamma;
    const double k = (d - 2.0) / b;
    const double c = ground_state_value(params, 0.0);
    const double beta = std::exp(std::lgamma(2.0 + k) + std::lgamma(k) - std::lgamma(2.0 + 2.0 * k));
    return params.surface_area * c * c * (d - 2.0) * (d - 2.0) * beta / b;
}

double hardy_sobolev_constant(const ProblemParams& params) {
    return std::pow(ground_state_h1_exact(params), 1.0 / params.p_star - 0.5);
}

RadialField ground_state_field(const ProblemParams& params, GridPtr grid) {
    if (grid->d != params.d) throw ValidationError("grid.d", "grid built for another dimension");
    return RadialField::sample(std::move(grid),
                               [&](double r) { return ground_state_value(params, r); });
}

double mountain_pass_energy(const ProblemParams& params, GridPtr grid) {
    return energy(ground_state_field(params, std::move(grid)), params).energy;
}

RadialField scale_field(const RadialField& u, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("scale.lambda", "lambda must be positive");
    }
    const auto& g = u.grid();
    const std::size_t n = g.n;
    const auto y = u.values();
    const auto m = monotone_slopes(y, g.dr);
    const double amp = std::pow(lambda, 0.5 * (g.d - 2));
    const double r0 = g.nodes[0];
    const double r1 = g.nodes[1];
    const double last = g.nodes[n - 1];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lambda * g.nodes[i];
        double v = 0.0;
        if (x >= last) {
            v = y[n - 1] * std::pow(last / x, g.d - 2);
        } else if (x <= r0) {
            // even extension: quadratic in r through the two innermost nodes
            v = y[0] + (y[1] - y[0]) * (x * x - r0 * r0) / (r1 * r1 - r0 * r0);
        } else {
            const double s = (x - r0) / g.dr;
            auto k = static_cast<std::size_t>(s);
            if (k >= n - 1) k = n - 2;
            const double t = s - static_cast<double>(k);
            const double t2 = t * t;
            const double t3 = t2 * t;
            v = (2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * g.dr * m[k] +
                (-2 * t3 + 3 * t2) * y[k + 1] + (t3 - t2) * g.dr * m[k + 1];
        }
        out[i] = amp * v;
    }
    return RadialField(u.grid_ptr(), std::move(out));
}

double check_hardy_sobolev(const RadialField& u, const ProblemParams& params) {
    const double h1 = h1_norm_sq(u);
    if (!(h1 > 0.0)) throw ValidationError("u", "Hardy-Sobolev ratio undefined for a constant field");
    return std::pow(hs_term(u, params), 1.0 / params.p_star) / std::sqrt(h1);
}

double rellich_factor(int d) {
    const double dd = d;
    return 16.0 / (dd * dd * (dd - 4.0) * (dd - 4.0));
}

Verdict check_rellich(const RadialField& u, const ProblemParams& params) {
    if (params.d < 5) throw ValidationError("params.d", "Rellich inequality requires d >= 5");
    const auto& g = u.grid();
    const auto w = singular_cell_measure(g, 4.0);
    double lhs = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) lhs += u[j] * u[j] * w[j];
    const RadialLaplacian lap(g, OuterBoundary::dirichlet);
    const auto lu = lap.apply(u.data());
    const double rhs = rellich_factor(params.d) * volume_dot(g, lu, lu);
    return make_verdict(lhs, rhs, 1e-2);
}

void validate_holder(const HolderIndices& idx) {
    auto bad = [](double x) { return !(x > 0.0); };
    if (bad(idx.q1) || bad(idx.q2) || bad(idx.q) || bad(idx.r1) || bad(idx.r2) || bad(idx.r)) {
        throw ValidationError("holder", "all indices must be positive");
    }
    if (std::isinf(idx.q1) || std::isinf(idx.q)) {
        throw ValidationError("holder.q", "only q2 may be infinite");
    }
    if (std::isinf(idx.q2) && !std::isinf(idx.r2)) {
        throw ValidationError("holder.r2", "q2 = inf requires r2 = inf");
    }
    const double lhs = 1.0 / idx.q;
    const double sum = 1.0 / idx.q1 + 1.0 / idx.q2;
    if (std::abs(lhs - sum) > 1e-12 * std::max(1.0, sum)) {
        std::ostringstream os;
        os << "1/q = " << lhs << " must equal 1/q1 + 1/q2 = " << sum;
        throw ValidationError("holder.q", os.str());
    }
    if (1.0 / idx.r > 1.0 / idx.r1 + 1.0 / idx.r2 + 1e-12) {
        throw ValidationError("holder.r", "need 1/r <= 1/r1 + 1/r2");
    }
}

Verdict check_lorentz_holder(const RadialField& f, const RadialField& g,
                             const HolderIndices& idx) {
    validate_holder(idx);
    const double lhs = lorentz_norm(f.times(g), idx.q, idx.r);
    const double gn = std::isinf(idx.q2) ? lebesgue_norm(g, idx.q2)
                                         : lorentz_norm(g, idx.q2, idx.r2);
    const double rhs = kHolderConstant * lorentz_norm(f, idx.q1, idx.r1) * gn;
    return make_verdict(lhs, rhs, 0.0);
}

Verdict check_critical_embedding(const RadialField& u, const ProblemParams& params,
                                 double c_emb) {
    if (is_zero(u)) throw ValidationError("u", "embedding ratio undefined for the zero field");
    const double lhs = lorentz_norm(u, params.q_c, 2.0);
    const double rhs = c_emb * std::sqrt(h1_norm_sq(u));
    return make_verdict(lhs, rhs, 0.0);
}

}  // namespace hsplab
