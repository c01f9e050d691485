// errors.hpp — Exception types shared by all weakdwell modules

#pragma once

#include <stdexcept>
#include <string>

namespace weakdwell {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside an operation's stated domain (bad time window, omega' > 2*omega, ...).
struct DomainError : Error {
    using Error::Error;
};

// Weak-value denominator |<post|pre>| at or below the overlap cutoff.
struct NearOrthogonalPostSelection : Error {
    using Error::Error;
};

struct GridTooNarrow : Error {
    using Error::Error;
};

struct NonHermitianOperator : Error {
    using Error::Error;
};

struct DegenerateWavefunction : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct NormDriftExceeded : Error {
    using Error::Error;
};

struct WindowOutOfRange : Error {
    using Error::Error;
};

struct AmplitudeUnderflow : Error {
    using Error::Error;
};

struct DegenerateDenominator : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace weakdwell
