#include "hsplab/grid.hpp"

#include <cmath>
#include <string>

#include "hsplab/errors.hpp"

namespace hsplab {

GridPtr make_grid(const ProblemParams& params, std::size_t n, double r_max) {
    if (n < 16) {
        throw ValidationError("grid.n", "need at least 16 nodes, got " + std::to_string(n));
    }
    if (!(r_max > 0.0) || !std::isfinite(r_max)) {
        throw ValidationError("grid.r_max", "truncation radius must be positive");
    }
    auto g = std::make_shared<RadialGrid>();
    g->d = params.d;
    g->surface_area = params.surface_area;
    g->n = n;
    g->r_max = r_max;
    g->dr = r_max / static_cast<double>(n);
    g->nodes.resize(n);
    g->weights.resize(n);
    g->cell_volumes.resize(n);
    const double dd = params.d;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = (static_cast<double>(j) + 0.5) * g->dr;
        g->nodes[j] = r;
        g->weights[j] = params.surface_area * std::pow(r, dd - 1.0) * g->dr;
        const double lo = g->face(j);
        const double hi = g->face(j + 1);
        g->cell_volumes[j] = params.surface_area * (std::pow(hi, dd) - std::pow(lo, dd)) / dd;
    }
    return g;
}

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j])) {
            throw NumericalError(std::string(what) + ": non-finite sample at index " +
                                 std::to_string(j));
        }
    }
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) {
        throw NumericalError("radial field: missing grid");
    }
    if (values_.size() != grid_->n) {
        throw NumericalError("radial field: " + std::to_string(values_.size()) +
                             " samples for a grid of " + std::to_string(grid_->n) + " nodes");
    }
    require_finite(values_, "radial field");
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid->n);
    for (std::size_t j = 0; j < grid->n; ++j) v[j] = f(grid->nodes[j]);
    return RadialField(std::move(grid), std::move(v));
}

RadialField RadialField::zeros(GridPtr grid) {
    std::vector<double> v(grid->n, 0.0);
    return RadialField(std::move(grid), std::move(v));
}

RadialField RadialField::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return RadialField(grid_, std::move(v));
}

RadialField RadialField::times(const RadialField& other) const {
    if (other.grid_ != grid_ && other.size() != size()) {
        throw NumericalError("radial field: product of fields on different grids");
    }
    std::vector<double> v(values_);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= other.values_[j];
    return RadialField(grid_, std::move(v));
}

RadialField RadialField::plus(const RadialField& other, double c) const {
    if (other.grid_ != grid_ && other.size() != size()) {
        throw NumericalError("radial field: sum of fields on different grids");
    }
    std::vector<double> v(values_);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * other.values_[j];
    return RadialField(grid_, std::move(v));
}

double radial_integral(const RadialGrid& grid, std::span<const double> values) {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * grid.weights[j];
    return s;
}

double radial_integral(const RadialField& f) { return radial_integral(f.grid(), f.values()); }

}  // namespace hsplab
