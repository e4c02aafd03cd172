#pragma once

namespace hsplab {

/// Argument at which Bessel evaluation switches from the power series to the
/// large-argument form (closed form for half-integer orders, Hankel's
/// asymptotic expansion otherwise).
inline constexpr double kBesselSwitchover = 12.0;

/// J_nu(z) for nu >= 0, z >= 0. Absolute accuracy ~1e-10 or better for the
/// orders nu = d/2 - 1 used by the radial transforms (3 <= d <= 10).
double bessel_j(double nu, double z);

/// Spherical Bessel kernel of R^d: J_nu(z) / z^nu with nu = d/2 - 1.
///
/// This is the even, entire function through which the Fourier transform of a
/// radial function reduces to a one-dimensional integral; it equals
/// 1 / (2^nu Gamma(nu + 1)) at z = 0.
class RadialKernel {
public:
    explicit RadialKernel(int d);

    double operator()(double z) const;
    double order() const { return nu_; }

private:
    double series(double z) const;
    double large(double z) const;

    int d_;
    double nu_;
    double inv_gamma_;   // 1 / Gamma(nu + 1)
    double two_pow_nu_;  // 2^nu
    bool half_integer_;
};

}  // namespace hsplab
