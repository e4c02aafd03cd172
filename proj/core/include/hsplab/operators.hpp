#pragma once

#include <vector>

#include "hsplab/grid.hpp"

namespace hsplab {

/// Closure at r_max. `dirichlet` pins u(r_max) = 0; `harmonic` imposes
/// u_r = -(d - 2) u / r, the decay of the fundamental solution, which keeps
/// slowly decaying stationary profiles from feeling the cut.
enum class OuterBoundary { dirichlet, harmonic };

/// Finite-volume radial Laplacian on cell centers,
///   (L u)_j = (F_{j+1/2} - F_{j-1/2}) / V_j,  F_{j+1/2} = |S| r_{j+1/2}^{d-1} (u_{j+1} - u_j) / dr,
/// with zero flux through the origin. Stored as a tridiagonal matrix.
struct RadialLaplacian {
    std::vector<double> lower;  // coefficient of u_{j-1}; lower[0] unused
    std::vector<double> diag;
    std::vector<double> upper;  // coefficient of u_{j+1}; upper[n-1] unused

    RadialLaplacian(const RadialGrid& grid, OuterBoundary bc);

    std::size_t size() const { return diag.size(); }
    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    std::vector<double> apply(const std::vector<double>& u) const;
};

/// Solves (alpha I + beta L) x = rhs with the Thomas algorithm. Throws
/// NumericalError on a vanishing pivot.
void solve_shifted(const RadialLaplacian& lap, double alpha, double beta,
                   const std::vector<double>& rhs, std::vector<double>& x);

/// sum_j a_j b_j V_j over exact cell volumes.
double volume_dot(const RadialGrid& grid, const std::vector<double>& a,
                  const std::vector<double>& b);

/// Exact integral of |x|^{-a} over each cell shell (a < d).
std::vector<double> singular_cell_measure(const RadialGrid& grid, double a);

}  // namespace hsplab
