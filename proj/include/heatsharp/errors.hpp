#pragma once

#include <stdexcept>
#include <string>

namespace heatsharp {

/// Base class for all library failures. Catching this catches everything
/// the library throws on its own behalf.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An exponent triple (p, q, r) that violates 1/p + 1/q >= 1.
class InvalidTriple : public Error {
public:
    explicit InvalidTriple(const std::string& what) : Error(what) {}
};

/// An argument outside the domain of the requested operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Convolution of Gaussian profiles whose widths satisfy
/// 1/tau1 + 1/tau2 <= 0; the defining integral diverges.
class DivergentConvolution : public Error {
public:
    explicit DivergentConvolution(const std::string& what) : Error(what) {}
};

/// Norm requested for a profile that is not in the space (for example
/// an L^p norm of a growing Gaussian profile, which is infinite).
class NonNormable : public Error {
public:
    explicit NonNormable(const std::string& what) : Error(what) {}
};

/// The extremizing input for this exponent pair exists only as a limit
/// of admissible inputs and cannot be materialized.
class LimitOnlyExtremizer : public Error {
public:
    explicit LimitOnlyExtremizer(const std::string& what) : Error(what) {}
};

} // namespace heatsharp
