#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hsplab/params.hpp"

namespace hsplab {

/// Cell-centered radial discretization of R^d truncated at r_max.
///
/// Node j sits at r_j = (j + 1/2) dr; the origin is never sampled. `weights`
/// are midpoint quadrature weights |S^{d-1}| r_j^{d-1} dr, `cell_volumes` the
/// exact shell volumes between faces j dr and (j + 1) dr.
struct RadialGrid {
    int d = 0;
    double surface_area = 0.0;
    std::size_t n = 0;
    double dr = 0.0;
    double r_max = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> cell_volumes;

    double face(std::size_t j) const { return static_cast<double>(j) * dr; }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Requires n >= 16 and r_max > 0.
GridPtr make_grid(const ProblemParams& params, std::size_t n, double r_max);

/// Radially symmetric samples u(r_j) on a grid. Construction rejects
/// non-finite samples and length mismatches with NumericalError.
class RadialField {
public:
    RadialField() = default;
    RadialField(GridPtr grid, std::vector<double> values);

    /// Samples f(r_j) at every node.
    static RadialField sample(GridPtr grid, const std::function<double(double)>& f);
    static RadialField zeros(GridPtr grid);

    const GridPtr& grid_ptr() const { return grid_; }
    const RadialGrid& grid() const { return *grid_; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& data() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

    RadialField scaled(double c) const;
    /// Pointwise product; both fields must share the same grid.
    RadialField times(const RadialField& other) const;
    RadialField plus(const RadialField& other, double c = 1.0) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Midpoint quadrature of f(|x|) over the truncated ball: sum_j f_j w_j.
double radial_integral(const RadialField& f);

/// Same quadrature applied to a raw sample vector on `grid`.
double radial_integral(const RadialGrid& grid, std::span<const double> values);

/// Throws NumericalError when any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace hsplab
