#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "heatsharp/constants.hpp"
#include "heatsharp/errors.hpp"
#include "heatsharp/exponents.hpp"

namespace heatsharp {

/// The closed Gaussian family x -> a * exp(-(x - mu)^2 / (4 tau)).
/// Amplitude is stored as log a so that extreme powers of narrow kernels
/// stay representable. Negative width means a growing profile, which the
/// algebra supports as long as convolutions stay convergent.
struct Gaussian {
    double log_amplitude;
    double center;
    double width; ///< tau; nonzero

    static Gaussian from_amplitude(double a, double mu, double tau) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw DomainError("Gaussian amplitude must be positive and finite");
        return from_log_amplitude(std::log(a), mu, tau);
    }

    static Gaussian from_log_amplitude(double log_a, double mu, double tau) {
        if (!std::isfinite(log_a) || !std::isfinite(mu))
            throw DomainError("Gaussian parameters must be finite");
        if (!(tau != 0.0) || !std::isfinite(tau))
            throw DomainError("Gaussian width must be finite and nonzero");
        return Gaussian{log_a, mu, tau};
    }

    double amplitude() const { return std::exp(log_amplitude); }
};

/// The heat kernel Theta_t(x) = exp(-x^2/(4t)) / (2 sqrt(pi t)), t > 0.
inline Gaussian heat_kernel(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("heat_kernel requires t > 0");
    return Gaussian{-detail::kLogTwoSqrtPi - 0.5 * std::log(t), 0.0, t};
}

inline double evaluate(const Gaussian& g, double x) {
    const double d = x - g.center;
    return std::exp(g.log_amplitude - d * d / (4.0 * g.width));
}

/// Total mass a * 2 sqrt(pi tau). Infinite (NonNormable) for growing
/// profiles.
inline double integral(const Gaussian& g) {
    if (g.width < 0.0)
        throw NonNormable("integral of a growing Gaussian profile diverges");
    return std::exp(g.log_amplitude + detail::kLogTwoSqrtPi + 0.5 * std::log(g.width));
}

/// Exact convolution: widths and centers add, and the amplitude picks up
/// the factor 2 sqrt(pi / (1/tau1 + 1/tau2)). Defined only when
/// 1/tau1 + 1/tau2 > 0; otherwise the integral diverges.
inline Gaussian convolve(const Gaussian& f, const Gaussian& g) {
    const double inv_sum = 1.0 / f.width + 1.0 / g.width;
    if (!(inv_sum > 0.0))
        throw DivergentConvolution("convolution requires 1/tau1 + 1/tau2 > 0");
    const double log_a = f.log_amplitude + g.log_amplitude +
                         detail::kLogTwoSqrtPi - 0.5 * std::log(inv_sum);
    return Gaussian{log_a, f.center + g.center, f.width + g.width};
}

/// Pointwise power g^beta for beta > 0: amplitude a^beta, width tau/beta.
inline Gaussian power(const Gaussian& g, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("Gaussian power requires finite beta > 0");
    return Gaussian{beta * g.log_amplitude, g.center, g.width / beta};
}

/// log ||g||_p = log a + (1/(2p)) log(4 pi tau / p). The sup norm (p
/// infinite) is log a. Growing profiles have no finite norm.
inline double log_lp_norm(const Gaussian& g, Exponent p) {
    if (g.width < 0.0)
        throw NonNormable("L^p norm of a growing Gaussian profile diverges");
    const double y = p.reciprocal();
    return g.log_amplitude +
           0.5 * (y * std::log(4.0 * std::acos(-1.0) * g.width) + detail::xlogx(y));
}

inline double lp_norm(const Gaussian& g, Exponent p) {
    return std::exp(log_lp_norm(g, p));
}

/// The input saturating the sharp heat estimate at time t:
/// Theta_t^{beta(p,q)}. Throws LimitOnlyExtremizer when the extremal
/// power is a limit object (p = 1 or q = 1), InvalidTriple when the pair
/// is inadmissible.
inline Gaussian extremal_input(Exponent p, Exponent q, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("extremal_input requires t > 0");
    const ExtremalBeta beta = extremal_beta(p, q);
    if (!beta.attained())
        throw LimitOnlyExtremizer("extremal input for (" + p.str() + ", " + q.str() +
                                  ") is attained only in the limit beta -> " +
                                  (beta.kind == ExtremalBeta::Kind::zero_limit ? "0" : "infinity"));
    return power(heat_kernel(t), beta.value);
}

} // namespace heatsharp
