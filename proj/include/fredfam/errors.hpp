#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fredfam {

// Base of every error raised by the library. Each subclass names one failure
// mode of the contracts in the module headers.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed parameter space (dangling edge endpoint, duplicate vertex, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Arithmetic between a Toeplitz-kind and a diagonal-kind operator, or between
// diagonal cores of incompatible shape.
class KindMismatchError : public Error {
public:
    using Error::Error;
};

// The symbol curve passes within the Fredholm margin of lambda.
class OnEssentialSpectrumError : public Error {
public:
    using Error::Error;
};

// Finite-section estimates did not stabilize within the allowed doublings.
class InstabilityError : public Error {
public:
    using Error::Error;
};

// Some sampled point of a family is not Fredholm. `points` lists the
// offending sample locations.
class NotFredholmError : public Error {
public:
    NotFredholmError(const std::string& what, std::vector<std::string> points)
        : Error(what), points_(std::move(points)) {}
    const std::vector<std::string>& points() const noexcept { return points_; }

private:
    std::vector<std::string> points_;
};

// Two samples of one component report different indices. For a continuous
// family this only happens when the edge sampling is too coarse.
class DiscretizationError : public Error {
public:
    using Error::Error;
};

// The input sequence does not converge within the provided prefix.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

// A polynomial root lies on (within the margin of) an essential curve.
class IllPosedError : public Error {
public:
    using Error::Error;
};

// The structural hypothesis of a limit theorem does not hold for the input.
class HypothesisViolationError : public Error {
public:
    using Error::Error;
};

// Scenario config does not match the schema. The message carries the field path.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace fredfam
