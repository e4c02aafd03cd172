#include "hsplab/bessel.hpp"

#include <cmath>
#include <numbers>

#include "hsplab/errors.hpp"

namespace hsplab {

namespace {

// sum_k (-z^2/4)^k / (k! Gamma(nu + k + 1)), i.e. J_nu(z) (2/z)^nu.
double reduced_series(double nu, double z) {
    const double x = -0.25 * z * z;
    double term = 1.0 / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (static_cast<double>(k) * (nu + static_cast<double>(k)));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 0.5 * z) break;
    }
    return sum;
}

double hankel_asymptotic(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;  // a_k(nu) / z^k
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (static_cast<double>(k) * 8.0 * z);
        const double mag = std::abs(a);
        if (mag > last) break;  // asymptotic series has started to diverge
        last = mag;
        const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
        if (k % 2 == 0) {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if (mag < 1e-17) break;
    }
    const double omega = z - 0.5 * nu * std::numbers::pi - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::cos(omega) - q * std::sin(omega));
}

// J_{n + 1/2}(z) via upward recurrence of spherical Bessel functions; stable for z > n.
double half_integer_j(int n, double z) {
    const double s = std::sin(z);
    const double c = std::cos(z);
    double jm = s / z;
    if (n == 0) return std::sqrt(2.0 * z / std::numbers::pi) * jm;
    double j = s / (z * z) - c / z;
    for (int k = 1; k < n; ++k) {
        const double next = (2.0 * k + 1.0) / z * j - jm;
        jm = j;
        j = next;
    }
    return std::sqrt(2.0 * z / std::numbers::pi) * j;
}

bool is_half_integer(double nu) {
    const double twice = 2.0 * nu;
    return std::abs(twice - std::round(twice)) < 1e-14 &&
           static_cast<long>(std::round(twice)) % 2 == 1;
}

}  // namespace

double bessel_j(double nu, double z) {
    if (nu < 0.0 || z < 0.0) {
        throw ValidationError("bessel", "order and argument must be nonnegative");
    }
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (z < kBesselSwitchover) return std::pow(0.5 * z, nu) * reduced_series(nu, z);
    if (is_half_integer(nu)) return half_integer_j(static_cast<int>(nu - 0.5 + 0.25), z);
    return hankel_asymptotic(nu, z);
}

RadialKernel::RadialKernel(int d)
    : d_(d),
      nu_(0.5 * d - 1.0),
      inv_gamma_(1.0 / std::tgamma(0.5 * d)),
      two_pow_nu_(std::pow(2.0, 0.5 * d - 1.0)),
      half_integer_(d % 2 == 1) {
    if (d < 3) throw ValidationError("d", "radial kernel requires d >= 3");
}

double RadialKernel::series(double z) const { return reduced_series(nu_, z) / two_pow_nu_; }

double RadialKernel::large(double z) const {
    const double j = half_integer_ ? half_integer_j((d_ - 3) / 2, z) : hankel_asymptotic(nu_, z);
    return j / std::pow(z, nu_);
}

double RadialKernel::operator()(double z) const {
    z = std::abs(z);
    if (z == 0.0) return inv_gamma_ / two_pow_nu_;
    if (z < kBesselSwitchover) return series(z);
    return large(z);
}

}  // namespace hsplab
