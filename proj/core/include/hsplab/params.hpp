#pragma once

namespace hsplab {

/// Dimension, singularity exponent and the exponents derived from them.
struct ProblemParams {
    int d = 5;
    double gamma = 1.0;
    double p_star = 0.0;            // 2(d - gamma)/(d - 2)
    double q_c = 0.0;               // 2d/(d - 2)
    double surface_area = 0.0;      // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    double regime_threshold = 0.0;  // 10 - 4 gamma
    double bootstrap_ratio = 0.0;   // 4(2 - gamma)/(d - 2)

    /// Algebraic decay regime, i.e. d <= 10 - 4 gamma.
    bool algebraic_regime() const { return bootstrap_ratio >= 1.0; }
};

/// Validates d >= 3 and 0 <= gamma < 2 and fills the derived fields.
ProblemParams make_params(int d, double gamma);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace hsplab
