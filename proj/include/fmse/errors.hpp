#pragma once

#include <stdexcept>
#include <string>

namespace fmse {

// Base class for all library failures. Subclasses map onto CLI exit codes:
// precondition violations exit 2, numerical failures exit 3.
struct FmseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : FmseError {
    using FmseError::FmseError;
};
struct NumericalError : FmseError {
    using FmseError::FmseError;
};

struct SpecViolation : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct DomainError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct RadiusExceeded : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct BasisMismatch : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NumericalOverflow : NumericalError {
    using NumericalError::NumericalError;
};
struct SingularSystem : NumericalError {
    using NumericalError::NumericalError;
};
struct ContractionFailure : NumericalError {
    ContractionFailure(const std::string& msg, double suggested)
        : NumericalError(msg), suggested_amplitude(suggested) {}
    double suggested_amplitude;
};
struct BarrierFailure : NumericalError {
    using NumericalError::NumericalError;
};
struct StencilTooCoarse : NumericalError {
    using NumericalError::NumericalError;
};
struct PositivityFailure : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace fmse
