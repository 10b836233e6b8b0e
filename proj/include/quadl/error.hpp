#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quadl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed a configured budget (terms, nodes, expansion size).
class ResourceError : public Error {
public:
    ResourceError(const std::string& what, std::uint64_t required = 0)
        : Error(what), required_(required) {}
    /// Budget that would have been needed, 0 when unknown.
    std::uint64_t required() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

/// -L'/L requested where |L| is below the conditioning floor.
class NearZeroError : public Error {
public:
    NearZeroError(const std::string& what, double magnitude) : Error(what), magnitude_(magnitude) {}
    double magnitude() const noexcept { return magnitude_; }

private:
    double magnitude_;
};

/// Evaluation too close to a pole of the gamma factor.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Numerics cannot decide the answer (a certificate could not be produced).
class IndeterminateError : public Error {
public:
    using Error::Error;
};

/// A quadrature or contour integral did not reach the required accuracy.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A contour passes too close to a zero of the integrand.
class ContourProximityError : public IndeterminateError {
public:
    ContourProximityError(const std::string& what, double min_modulus)
        : IndeterminateError(what), min_modulus_(min_modulus) {}
    double min_modulus() const noexcept { return min_modulus_; }

private:
    double min_modulus_;
};

/// A truncated random series has a tail larger than the requested tolerance.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::uint64_t suggested_cutoff)
        : Error(what), suggested_cutoff_(suggested_cutoff) {}
    std::uint64_t suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    std::uint64_t suggested_cutoff_;
};

/// Cached artifact failed its integrity check.
class CacheError : public Error {
public:
    using Error::Error;
};

}  // namespace quadl
