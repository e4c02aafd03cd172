#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hsplab/grid.hpp"

namespace hsplab {

/// Cell-centered radial frequencies rho_k = (k + 1/2) d_rho, k < count.
struct FrequencyGrid {
    int d = 0;
    double surface_area = 0.0;
    double d_rho = 0.0;
    std::size_t count = 0;
    std::vector<double> rho;

    double upper() const { return d_rho * static_cast<double>(count); }
};

using FrequencyPtr = std::shared_ptr<const FrequencyGrid>;

FrequencyPtr make_frequencies(int d, double d_rho, std::size_t count);

/// Frequencies dual to a radial grid: d_rho = pi / r_max, one per node, so the
/// band reaches pi / dr.
FrequencyPtr dual_frequencies(const RadialGrid& grid);

/// Fine low-frequency set covering [0, upper] with `count` cells.
FrequencyPtr low_frequencies(int d, double upper, std::size_t count);

/// Radial profile u^(rho_k) of a field's Fourier transform.
///
/// The transform is the unitary one, u^(xi) = (2 pi)^{-d/2} int u(x) e^{-i x.xi} dx,
/// so that sum_k |u^_k|^2 |S^{d-1}| rho_k^{d-1} d_rho reproduces ||u||_2^2.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(FrequencyPtr freqs, std::vector<double> values);

    const FrequencyGrid& frequencies() const { return *freqs_; }
    const FrequencyPtr& frequencies_ptr() const { return freqs_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    int d() const { return freqs_->d; }

    /// Multiplies by rho^power (power = 1 is Lambda, 2 is -Laplacian).
    SpectralField weighted(double power) const;
    /// Multiplies by exp(-t rho^2).
    SpectralField heat(double t) const;
    /// sum |u^|^2 |S| rho^{d-1} d_rho.
    double l2_norm_sq() const;
    /// Mass of |rho^power u^|^2 over the ball B(radius), with the cell straddling
    /// the radius counted proportionally.
    double ball_mass(double radius, double power = 0.0) const;

private:
    FrequencyPtr freqs_;
    std::vector<double> values_;
};

/// Forward transform by direct Bessel-kernel quadrature on the grid nodes.
SpectralField hankel_transform(const RadialField& u, FrequencyPtr freqs);
SpectralField hankel_transform(const RadialField& u);

/// Adjoint quadrature back onto `grid` (midpoint rule in rho).
RadialField inverse_hankel(const SpectralField& s, GridPtr grid);

/// e^{t Delta} u through the spectral multiplier exp(-t rho^2).
RadialField heat_propagate(const RadialField& u, double t);
RadialField heat_propagate(const RadialField& u, double t, FrequencyPtr freqs);

struct LambdaResult {
    RadialField field;
    /// Share of ||rho^power u^||^2 carried by the top tenth of the band.
    double tail_fraction = 0.0;
    bool ill_conditioned = false;
};

/// Lambda^power u for power in {1, 2}; flags spectra whose amplified tail is
/// not resolved by the band (tail_fraction > 1e-4).
LambdaResult apply_lambda(const RadialField& u, double power);

struct DecayIndicator {
    double value = 0.0;
    /// Local log-slope d log P / d log rho at the cap; ~0 on a plateau,
    /// negative when P_r blows up as rho -> 0 (r above the decay character).
    double trend = 0.0;
    bool diverging = false;
    bool vanishing = false;
};

/// Finite-rho surrogate rho^{-2r-d} int_{B(rho)} |u^|^2 at rho = rho_cap.
DecayIndicator decay_indicator(const SpectralField& s, double r, double rho_cap);

struct DecayCharacterEstimate {
    double r_star = 0.0;
    std::pair<double, double> fit_window{0.0, 0.0};
    double fit_residual = 0.0;
    double p_r = 0.0;
    bool reliable = false;
    std::size_t samples = 0;
};

/// Least-squares slope m of log F(rho), F = int_{B(rho)} |u^|^2, over the
/// window; r* = (m - d)/2. Window defaults to [4 d_rho, 0.2].
DecayCharacterEstimate estimate_decay_character(const SpectralField& s);
DecayCharacterEstimate estimate_decay_character(const SpectralField& s, double rho_lo,
                                                double rho_hi);

/// int_{B(radius)} | |xi| u^ |^2 d xi.
double lowfreq_h1_mass(const SpectralField& s, double radius);

/// Lorentz index pair (q, r); use infinity() for the endpoint cases.
struct LorentzIndex {
    double q = 2.0;
    double r = 2.0;
};

struct SmoothingVerdict {
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs_power;  // t^{-(d/2)(1/q1 - 1/q2) - gamma/2} ||g||_{q1,r1}
    std::vector<double> ratios;
    double variation = 0.0;  // max ratio / ratio at the smallest time
    double constant = std::numeric_limits<double>::quiet_NaN();  // reference C, when given
    bool holds = false;
};

/// True when (source, target, gamma) satisfies the admissibility conditions of
/// the weighted heat-semigroup smoothing estimate in dimension d.
bool smoothing_admissible(int d, LorentzIndex source, LorentzIndex target, double gamma);

/// Best constant of ||e^{t Delta}(|x|^{-gamma} g)||_2 <= C t^{-gamma/2} ||g||_2
/// on `grid`, by power iteration on |x|^{-gamma} e^{2 Delta} |x|^{-gamma} at
/// t = 1 (C does not depend on t). gamma = 0 gives 1.
double smoothing_l2_constant(const GridPtr& grid, double gamma);

/// Tracks ||e^{t Delta}(|x|^{-gamma} g)||_{target} / (t-power ||g||_{source})
/// across `times`. With a finite `constant` the check holds when every ratio
/// stays below constant (1 + 1e-2); otherwise when the ratio never exceeds 3x
/// its value at the smallest time. Throws ValidationError for inadmissible
/// indices.
SmoothingVerdict check_weighted_smoothing(
    const RadialField& g, std::span<const double> times, LorentzIndex source,
    LorentzIndex target, double gamma,
    double constant = std::numeric_limits<double>::quiet_NaN());

}  // namespace hsplab
