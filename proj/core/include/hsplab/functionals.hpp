#pragma once

#include <limits>

#include "hsplab/grid.hpp"
#include "hsplab/params.hpp"

namespace hsplab {

struct FunctionalReport {
    double h1_sq = 0.0;    // ||u||_{H^1}^2 (homogeneous)
    double l2_sq = 0.0;
    double lqc = 0.0;      // ||u||_{L^{q_c}}
    double hs_term = 0.0;  // int |u|^{p*} |x|^{-gamma}
    double energy = 0.0;   // h1_sq / 2 - hs_term / p*
    double nehari = 0.0;   // h1_sq - hs_term
};

/// Outcome of one inequality check: lhs <= rhs up to the check's tolerance.
struct Verdict {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs, 0 when both vanish
    bool holds = false;
};

// Energy functionals treat the field beyond its last node r_e as the decaying
// harmonic profile u_e (r_e / r)^{d-2}, the tail shape of H^1 ground states,
// instead of cutting it at r_max.

/// Sum over interior faces of |S| r_{j+1/2}^{d-1} (u_{j+1} - u_j)^2 / dr, plus
/// the exterior energy |S| (d - 2) r_e^{d-2} u_e^2.
double h1_norm_sq(const RadialField& u);

/// int |u|^{p*} |x|^{-gamma} dx with |x|^{-gamma} integrated exactly over each
/// cell shell, plus the exterior tail beyond r_max.
double hs_term(const RadialField& u, const ProblemParams& params);

FunctionalReport energy(const RadialField& u, const ProblemParams& params);

/// W_gamma(r) = ((d-gamma)(d-2))^{(d-2)/(2(2-gamma))} (1 + r^{2-gamma})^{-(d-2)/(2-gamma)}.
double ground_state_value(const ProblemParams& params, double r);
RadialField ground_state_field(const ProblemParams& params, GridPtr grid);

/// E(W_gamma) on the grid; the mountain-pass level.
double mountain_pass_energy(const ProblemParams& params, GridPtr grid);

/// lambda^{(d-2)/2} u(lambda r) resampled on u's grid by monotone cubic
/// (Fritsch-Carlson) interpolation; past the last node the harmonic exterior
/// is used, which is negligible for fields that vanish at r_max.
RadialField scale_field(const RadialField& u, double lambda);

/// ||W_gamma||_{H^1}^2 in closed form: with b = 2 - gamma and k = (d - 2)/b,
/// |S| c^2 (d-2)^2 B(2 + k, k) / b, c = W_gamma(0).
double ground_state_h1_exact(const ProblemParams& params);

/// Sharp Hardy-Sobolev ratio, attained by W_gamma: ||W||_{H^1}^{2/p* - 1}.
double hardy_sobolev_constant(const ProblemParams& params);

/// hs_term^{1/p*} / ||u||_{H^1}. Throws ValidationError for a zero field.
double check_hardy_sobolev(const RadialField& u, const ProblemParams& params);

/// 16 / (d^2 (d-4)^2).
double rellich_factor(int d);

/// lhs = int |u|^2 / |x|^4, rhs = rellich_factor(d) int |Delta u|^2 with the
/// finite-volume Laplacian; holds when lhs <= rhs (1 + 1e-2). Needs d >= 5.
Verdict check_rellich(const RadialField& u, const ProblemParams& params);

/// Exponents of ||f g||_{q,r} <= C ||f||_{q1,r1} ||g||_{q2,r2}. q2 = r2 = inf
/// selects the L^infinity bound on g.
struct HolderIndices {
    double q1 = 4.0, r1 = 4.0;
    double q2 = 4.0, r2 = 4.0;
    double q = 2.0, r = 2.0;
};

inline constexpr double kHolderConstant = 4.0;

/// Throws ValidationError unless 1/q = 1/q1 + 1/q2 and 1/r <= 1/r1 + 1/r2.
void validate_holder(const HolderIndices& idx);
Verdict check_lorentz_holder(const RadialField& f, const RadialField& g,
                             const HolderIndices& idx);

/// Largest ||u||_{L^{q_c,2}} / ||u||_{H^1} seen at d = 5 (n = 2048,
/// r_max = 40) over the default 100-sample corpus together with W_gamma,
/// rounded up. The corpus alone peaks at 0.3691 and W_gamma reaches 0.4473.
/// A regression constant only, not a sharp constant.
inline constexpr double kCriticalEmbeddingConstant = 0.45;

/// lhs = ||u||_{L^{q_c,2}}, rhs = c_emb ||u||_{H^1}. Throws for a zero field.
Verdict check_critical_embedding(const RadialField& u, const ProblemParams& params,
                                 double c_emb = kCriticalEmbeddingConstant);

}  // namespace hsplab
