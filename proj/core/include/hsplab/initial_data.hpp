#pragma once

#include <string>
#include <variant>

#include "hsplab/grid.hpp"
#include "hsplab/params.hpp"

namespace hsplab {

/// amplitude * exp(-(r / width)^2).
struct Gaussian {
    double amplitude = 1.0;
    double width = 1.0;
};

/// lambda * W_gamma: amplitude scaling of the ground state, not the
/// H^1-invariant dilation (that is scale_field).
struct ScaledGroundState {
    double lambda = 1.0;
};

/// Field whose spectrum is amplitude * rho^s on [0, cutoff] and zero beyond.
struct FrequencyProfile {
    double s = -3.0;
    double cutoff = 1.0;
    double amplitude = 1.0;
};

using DataDescriptor = std::variant<Gaussian, ScaledGroundState, FrequencyProfile>;

/// Short human-readable form, e.g. "gaussian(1, 1)".
std::string describe(const DataDescriptor& data);

/// Throws ValidationError when the descriptor cannot produce an H^1 field in
/// dimension params.d. A frequency profile needs |xi| rho^s square integrable
/// near the origin, i.e. s > -(d + 2)/2.
void validate(const DataDescriptor& data, const ProblemParams& params);

/// Samples the descriptor on `grid`. Deterministic; the profile is built by
/// inverse transform from a frequency grid fine enough to resolve both the
/// cutoff and the truncation radius.
RadialField sample_initial_data(const DataDescriptor& data, const ProblemParams& params,
                                GridPtr grid);

}  // namespace hsplab
