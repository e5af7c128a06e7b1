#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nevlab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A numerical value together with an estimate of its absolute error.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

// Value and first derivative of a holomorphic function at a point.
struct Jet {
    cplx value{};
    cplx deriv{};
};

// Error taxonomy. Every error raised by the library derives from Error so the
// CLI can map it to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (|z| > r, alpha
// outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input: parse failures, dimension mismatches, zero sections.
class InputError : public Error {
public:
    using Error::Error;
};

// Requested accuracy not reachable within the configured work limits.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// Argument tracking lost continuity; the function is too wild at the
// sampling resolution.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// The object lacks a required capability (e.g. no exact rational locus).
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Linear-algebra shape violations (injective systems, too many points).
class StructuralError : public Error {
public:
    using Error::Error;
};

// Caller must change an input to satisfy a precondition (e.g. move w0 off a
// zero of the section).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace nevlab
