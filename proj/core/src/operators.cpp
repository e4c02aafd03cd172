#include "hsplab/operators.hpp"

#include <cmath>

#include "hsplab/errors.hpp"

namespace hsplab {

RadialLaplacian::RadialLaplacian(const RadialGrid& grid, OuterBoundary bc)
    : lower(grid.n, 0.0), diag(grid.n, 0.0), upper(grid.n, 0.0) {
    const std::size_t n = grid.n;
    const double dd = grid.d;
    auto conductance = [&](std::size_t face) {
        return grid.surface_area * std::pow(grid.face(face), dd - 1.0) / grid.dr;
    };
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a = conductance(j + 1) / grid.cell_volumes[j];
        const double b = conductance(j + 1) / grid.cell_volumes[j + 1];
        upper[j] = a;
        diag[j] -= a;
        lower[j + 1] = b;
        diag[j + 1] -= b;
    }
    const double area = grid.surface_area * std::pow(grid.r_max, dd - 1.0);
    double outer = 0.0;
    if (bc == OuterBoundary::dirichlet) {
        outer = area / (0.5 * grid.dr);
    } else {
        const double k = (dd - 2.0) / grid.r_max;
        outer = area * k / (1.0 + 0.5 * k * grid.dr);
    }
    diag[n - 1] -= outer / grid.cell_volumes[n - 1];
}

void RadialLaplacian::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const std::size_t n = diag.size();
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double v = diag[j] * u[j];
        if (j > 0) v += lower[j] * u[j - 1];
        if (j + 1 < n) v += upper[j] * u[j + 1];
        out[j] = v;
    }
}

std::vector<double> RadialLaplacian::apply(const std::vector<double>& u) const {
    std::vector<double> out;
    apply(u, out);
    return out;
}

void solve_shifted(const RadialLaplacian& lap, double alpha, double beta,
                   const std::vector<double>& rhs, std::vector<double>& x) {
    const std::size_t n = lap.size();
    std::vector<double> c(n);
    x.resize(n);
    double pivot = alpha + beta * lap.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("tridiagonal solve: zero pivot");
    c[0] = beta * lap.upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for (std::size_t j = 1; j < n; ++j) {
        const double l = beta * lap.lower[j];
        pivot = alpha + beta * lap.diag[j] - l * c[j - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("tridiagonal solve: zero pivot at row " + std::to_string(j));
        }
        c[j] = j + 1 < n ? beta * lap.upper[j] / pivot : 0.0;
        x[j] = (rhs[j] - l * x[j - 1]) / pivot;
    }
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= c[j] * x[j + 1];
}

double volume_dot(const RadialGrid& grid, const std::vector<double>& a,
                  const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) s += a[j] * b[j] * grid.cell_volumes[j];
    return s;
}

std::vector<double> singular_cell_measure(const RadialGrid& grid, double a) {
    const double e = grid.d - a;
    if (!(e > 0.0)) throw ValidationError("weight", "|x|^-a is not locally integrable for a >= d");
    std::vector<double> m(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        m[j] = grid.surface_area *
               (std::pow(grid.face(j + 1), e) - std::pow(grid.face(j), e)) / e;
    }
    return m;
}

}  // namespace hsplab
