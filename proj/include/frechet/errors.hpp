#pragma once

#include <stdexcept>
#include <string>

namespace frechet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (negative modulus input, r not in (0,1)).
struct DomainError : Error {
    using Error::Error;
};

// Dimension, depth or model-kind mismatch.
struct ShapeError : Error {
    using Error::Error;
};

// An operator that should be a contraction is not (estimate >= 1).
struct ContractionViolation : Error {
    using Error::Error;
};

// A supplied certificate (contraction factor, Lipschitz bound) was contradicted by measurement.
struct CertificateViolation : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

// A map produced a non-finite value.
struct EvaluationError : Error {
    using Error::Error;
};

// The requested metric ball is the whole space, so its gauge is meaningless.
struct DegenerateBall : Error {
    using Error::Error;
};

// No probe landed inside the requested ball.
struct EmptyEstimate : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct SingularVelocity : Error {
    using Error::Error;
};

}  // namespace frechet
