#include "hsplab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsplab/errors.hpp"
#include "hsplab/functionals.hpp"
#include "hsplab/spectral.hpp"

namespace hsplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string describe(const DataDescriptor& data) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                       os << "gaussian(" << g.amplitude << ", " << g.width << ")";
                   },
                   [&](const ScaledGroundState& w) {
                       os << "scaled_ground_state(" << w.lambda << ")";
                   },
                   [&](const FrequencyProfile& f) {
                       os << "frequency_profile(" << f.s << ", " << f.cutoff;
                       if (f.amplitude != 1.0) os << ", " << f.amplitude;
                       os << ")";
                   },
               },
               data);
    return os.str();
}

void validate(const DataDescriptor& data, const ProblemParams& params) {
    std::visit(overloaded{
                   [](const Gaussian& g) {
                       if (!(g.width > 0.0) || !std::isfinite(g.width)) {
                           throw ValidationError("data.width", "width must be positive");
                       }
                       if (!std::isfinite(g.amplitude)) {
                           throw ValidationError("data.amplitude", "amplitude must be finite");
                       }
                   },
                   [](const ScaledGroundState& w) {
                       if (!std::isfinite(w.lambda)) {
                           throw ValidationError("data.lambda", "lambda must be finite");
                       }
                   },
                   [&](const FrequencyProfile& f) {
                       if (!(f.cutoff > 0.0) || !std::isfinite(f.cutoff)) {
                           throw ValidationError("data.cutoff", "cutoff must be positive");
                       }
                       const double bound = -0.5 * (params.d + 2);
                       if (!(f.s > bound)) {
                           std::ostringstream os;
                           os << "exponent s = " << f.s << " must exceed -(d+2)/2 = " << bound
                              << " for the field to lie in H^1";
                           throw ValidationError("data.s", os.str());
                       }
                       if (!std::isfinite(f.amplitude)) {
                           throw ValidationError("data.amplitude", "amplitude must be finite");
                       }
                   },
               },
               data);
}

RadialField sample_initial_data(const DataDescriptor& data, const ProblemParams& params,
                                GridPtr grid) {
    validate(data, params);
    return std::visit(
        overloaded{
            [&](const Gaussian& g) {
                return RadialField::sample(grid, [&](double r) {
                    const double x = r / g.width;
                    return g.amplitude * std::exp(-x * x);
                });
            },
            [&](const ScaledGroundState& w) {
                return ground_state_field(params, grid).scaled(w.lambda);
            },
            [&](const FrequencyProfile& f) {
                const double per_cutoff = 8.0 * f.cutoff * grid->r_max;
                const auto count = static_cast<std::size_t>(
                    std::max(4096.0, std::ceil(per_cutoff)));
                const auto freqs =
                    make_frequencies(params.d, f.cutoff / static_cast<double>(count), count);
                std::vector<double> v(count);
                for (std::size_t k = 0; k < count; ++k) {
                    v[k] = f.amplitude * std::pow(freqs->rho[k], f.s);
                }
                return inverse_hankel(SpectralField(freqs, std::move(v)), grid);
            },
        },
        data);
}

}  // namespace hsplab
