#pragma once

#include <stdexcept>
#include <string>

namespace modparam {

struct ModparamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// series module
struct ZeroSeriesInverted : ModparamError {
    using ModparamError::ModparamError;
};
struct OffGridExponent : ModparamError {
    using ModparamError::ModparamError;
};
struct NonIntegerExponents : ModparamError {
    using ModparamError::ModparamError;
};

// modforms module
struct TailTooLarge : ModparamError {
    using ModparamError::ModparamError;
};
struct NonIntegerEntries : ModparamError {
    using ModparamError::ModparamError;
};
struct SupportViolation : ModparamError {
    using ModparamError::ModparamError;
};

// ode module
struct TruncationTooShort : ModparamError {
    using ModparamError::ModparamError;
};
struct SingularSystem : ModparamError {
    using ModparamError::ModparamError;
};
struct VerificationFailure : ModparamError {
    using ModparamError::ModparamError;
};
struct UnsupportedNormalization : ModparamError {
    using ModparamError::ModparamError;
};

// periods module
struct BadPrime : ModparamError {
    using ModparamError::ModparamError;
};
struct MissingBadPrime : ModparamError {
    using ModparamError::ModparamError;
};
struct DegenerateLattice : ModparamError {
    using ModparamError::ModparamError;
};
struct OnLatticePoint : ModparamError {
    using ModparamError::ModparamError;
};
struct InsufficientCoefficients : ModparamError {
    using ModparamError::ModparamError;
};

// bounds module
struct DomainError : ModparamError {
    using ModparamError::ModparamError;
};

}  // namespace modparam
