#pragma once

#include <stdexcept>
#include <string>

namespace hsplab {

/// Raised when an input violates a documented precondition. `field()` names
/// the offending parameter (a dotted path when it comes from a scenario).
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when numerical state is unusable (non-finite samples, singular solves).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hsplab
