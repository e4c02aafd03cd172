#include "hsplab/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hsplab/errors.hpp"

namespace hsplab {

ProblemParams make_params(int d, double gamma) {
    if (d < 3) {
        throw ValidationError("d", "dimension must be at least 3, got " + std::to_string(d));
    }
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma >= 2.0) {
        throw ValidationError("gamma", "gamma must lie in [0, 2) (0 < gamma < 2, with gamma = 0 "
                                       "as the comparison case), got " +
                                           std::to_string(gamma));
    }
    ProblemParams p;
    p.d = d;
    p.gamma = gamma;
    const double dd = d;
    p.p_star = 2.0 * (dd - gamma) / (dd - 2.0);
    p.q_c = 2.0 * dd / (dd - 2.0);
    p.surface_area = 2.0 * std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0);
    p.regime_threshold = 10.0 - 4.0 * gamma;
    p.bootstrap_ratio = 4.0 * (2.0 - gamma) / (dd - 2.0);
    return p;
}

double unit_ball_volume(int d) {
    const double dd = d;
    return std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0);
}

}  // namespace hsplab
