#include "hsplab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hsplab/errors.hpp"

namespace hsplab {

double LorentzSample::at(double t) const {
    if (levels.empty() || t >= edges.back()) return 0.0;
    const auto it = std::upper_bound(edges.begin(), edges.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1;
    return levels[std::min(k, levels.size() - 1)];
}

LorentzSample decreasing_rearrangement(const RadialField& u) {
    const auto& g = u.grid();
    const auto vals = u.values();
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Stable so equal levels keep grid order; the result is deterministic.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(vals[a]) > std::abs(vals[b]);
    });
    LorentzSample s;
    s.levels.reserve(vals.size());
    s.edges.reserve(vals.size() + 1);
    s.measure_points.reserve(vals.size());
    s.edges.push_back(0.0);
    for (std::size_t idx : order) {
        const double w = g.weights[idx];
        s.levels.push_back(std::abs(vals[idx]));
        s.measure_points.push_back(s.edges.back() + 0.5 * w);
        s.edges.push_back(s.edges.back() + w);
    }
    return s;
}

double distribution_function(const RadialField& u, double lambda) {
    double m = 0.0;
    const auto vals = u.values();
    for (std::size_t j = 0; j < vals.size(); ++j) {
        if (std::abs(vals[j]) > lambda) m += u.grid().weights[j];
    }
    return m;
}

double lorentz_norm(const LorentzSample& s, double q, double r) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw ValidationError("lorentz.q", "Lorentz exponent q must be finite and positive");
    }
    if (!(r > 0.0)) {
        throw ValidationError("lorentz.r", "Lorentz exponent r must be positive");
    }
    if (std::isinf(r)) {
        double sup = 0.0;
        for (std::size_t k = 0; k < s.levels.size(); ++k) {
            sup = std::max(sup, std::pow(s.measure_points[k], 1.0 / q) * s.levels[k]);
        }
        return sup;
    }
    // int (t^{1/q} f*)^r dt/t over a step [a, b) with level c is c^r (q/r)(b^{r/q} - a^{r/q}).
    const double e = r / q;
    double acc = 0.0;
    double prev = 0.0;  // a^{r/q}
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const double next = std::pow(s.edges[k + 1], e);
        if (s.levels[k] > 0.0) acc += std::pow(s.levels[k], r) * (next - prev);
        prev = next;
    }
    return std::pow(acc / e, 1.0 / r);
}

double lorentz_norm(const RadialField& u, double q, double r) {
    return lorentz_norm(decreasing_rearrangement(u), q, r);
}

double lebesgue_norm(const RadialField& u, double q) {
    if (!(q > 0.0)) throw ValidationError("lebesgue.q", "exponent must be positive");
    const auto vals = u.values();
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
        s += std::pow(std::abs(vals[j]), q) * u.grid().weights[j];
    }
    return std::pow(s, 1.0 / q);
}

}  // namespace hsplab
