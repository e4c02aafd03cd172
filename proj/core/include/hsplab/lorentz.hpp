#pragma once

#include <vector>

#include "hsplab/grid.hpp"

namespace hsplab {

/// Decreasing rearrangement of a sampled field, with grid cells as atoms of
/// measure w_j. `levels[k]` is f* on [edges[k], edges[k+1]); `measure_points`
/// are the cell midpoints in t, where the sampled level is attained.
struct LorentzSample {
    std::vector<double> levels;
    std::vector<double> edges;           // size levels.size() + 1, edges[0] = 0
    std::vector<double> measure_points;

    /// f*(t) for t >= 0 (zero past the total measure).
    double at(double t) const;
    double total_measure() const { return edges.empty() ? 0.0 : edges.back(); }
};

LorentzSample decreasing_rearrangement(const RadialField& u);

/// Distribution function |{ |u| > lambda }| under the same atoms.
double distribution_function(const RadialField& u, double lambda);

/// ||u||_{L^{q,r}}. For r < inf the defining integral is evaluated exactly
/// for the step function f*; for r = inf the sup is taken over the sampled
/// levels at their measure points. Requires 0 < q < inf, 0 < r <= inf.
double lorentz_norm(const RadialField& u, double q, double r);
double lorentz_norm(const LorentzSample& s, double q, double r);

/// ||u||_{L^q} by midpoint quadrature; q = inf gives the max modulus.
double lebesgue_norm(const RadialField& u, double q);

}  // namespace hsplab
