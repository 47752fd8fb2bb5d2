#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "heatsharp/errors.hpp"
#include "heatsharp/exponents.hpp"

namespace heatsharp {

namespace detail {

/// x log x extended by continuity: 0 log 0 = 0. Keeps every constant
/// below finite and exact at the exponent endpoints.
inline double xlogx(double x) {
    return x <= 0.0 ? 0.0 : x * std::log(x);
}

/// log(2 sqrt(pi))
inline const double kLogTwoSqrtPi = std::log(4.0 * std::acos(-1.0)) / 2.0;

/// log of Beckner's constant c_p = p^{1/p} / p'^{1/p'} as a function of
/// the reciprocal x = 1/p.
inline double log_c_from_reciprocal(double x) {
    return -xlogx(x) + xlogx(1.0 - x);
}

/// log of alpha_q, the t-independent factor in the kernel norm
/// ||Theta_t||_q = alpha_q * t^{-(1 - 1/q)/2}, as a function of y = 1/q.
inline double log_alpha_from_reciprocal(double y) {
    return -(1.0 - y) * kLogTwoSqrtPi + 0.5 * xlogx(y);
}

/// Requires the fields of a caller-supplied triple to satisfy the
/// defining relation 1 + 1/r = 1/p + 1/q.
inline void validate_triple(const YoungTriple& t) {
    const double x = t.p.reciprocal();
    const double y = t.q.reciprocal();
    const double z = t.r.reciprocal();
    if (t.q.is_one() && t.r == t.p) return;
    if (t.p.is_one() && t.r == t.q) return;
    if (std::fabs(x + y - 1.0 - z) > 1e-12)
        throw InvalidTriple("triple (" + t.p.str() + ", " + t.q.str() + ", " + t.r.str() +
                            ") does not satisfy 1 + 1/r = 1/p + 1/q");
}

} // namespace detail

/// Beckner's constant c_p = p^{1/p} / p'^{1/p'}, with c_1 = c_inf = 1.
inline double c_constant(Exponent p) {
    return std::exp(detail::log_c_from_reciprocal(p.reciprocal()));
}

/// The sharp kernel norm factor: ||Theta_t||_q = alpha(q) * t^{-(1-1/q)/2}.
/// alpha(1) = 1 (unit mass) and alpha(inf) = 1/(2 sqrt(pi)).
inline double alpha(Exponent q) {
    return std::exp(detail::log_alpha_from_reciprocal(q.reciprocal()));
}

/// Exponent of t in the kernel norm decay: (1 - 1/q)/2.
inline double decay_exponent(Exponent q) {
    return 0.5 * (1.0 - q.reciprocal());
}

/// Sharp constant in Young's inequality ||f*g||_r <= C ||f||_p ||g||_q,
/// C = sqrt(c_p c_q / c_r) with r solving 1 + 1/r = 1/p + 1/q.
inline double sharp_young_constant(Exponent p, Exponent q) {
    const YoungTriple t = young_r(p, q);
    const double log_c = detail::log_c_from_reciprocal(t.p.reciprocal()) +
                         detail::log_c_from_reciprocal(t.q.reciprocal()) -
                         detail::log_c_from_reciprocal(t.r.reciprocal());
    return std::exp(0.5 * log_c);
}

/// Sharp constant in ||f*Theta_t||_r <= K t^{-(1-1/q)/2} ||f||_p,
/// namely K = C_{p,q} alpha_q. Equals 1 when q = 1.
inline double heat_estimate_constant(Exponent p, Exponent q) {
    const YoungTriple t = young_r(p, q);
    const double log_c = detail::log_c_from_reciprocal(t.p.reciprocal()) +
                         detail::log_c_from_reciprocal(t.q.reciprocal()) -
                         detail::log_c_from_reciprocal(t.r.reciprocal());
    return std::exp(0.5 * log_c + detail::log_alpha_from_reciprocal(t.q.reciprocal()));
}

/// The Gaussian power beta for which Theta_t^beta saturates the heat
/// estimate. Finite only for p, q in (1, infinity); the endpoint pairs
/// extremize only along a limit of powers.
struct ExtremalBeta {
    enum class Kind { finite, zero_limit, infinite_limit, indeterminate };

    Kind kind;
    /// The power itself for kind finite; 0, +infinity, or NaN otherwise.
    double value;

    bool attained() const { return kind == Kind::finite; }

    std::string kind_name() const {
        switch (kind) {
            case Kind::finite: return "finite";
            case Kind::zero_limit: return "zero_limit";
            case Kind::infinite_limit: return "infinite_limit";
            default: return "indeterminate";
        }
    }
};

/// beta = (1 - 1/q) / (1 - 1/p), classified by endpoint behaviour.
/// Throws InvalidTriple when (p, q) is not Young-admissible.
inline ExtremalBeta extremal_beta(Exponent p, Exponent q) {
    young_r(p, q);
    const double px = 1.0 - p.reciprocal();
    const double qy = 1.0 - q.reciprocal();
    if (px == 0.0 && qy == 0.0)
        return {ExtremalBeta::Kind::indeterminate, std::numeric_limits<double>::quiet_NaN()};
    if (qy == 0.0)
        return {ExtremalBeta::Kind::zero_limit, 0.0};
    if (px == 0.0)
        return {ExtremalBeta::Kind::infinite_limit, std::numeric_limits<double>::infinity()};
    return {ExtremalBeta::Kind::finite, qy / px};
}

/// The power-versus-shift profile g(x) = x^A / (1+x)^B for x > 0.
inline double g_profile(double A, double B, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("g_profile requires x > 0");
    return std::exp(A * std::log(x) - B * std::log1p(x));
}

/// Maximizer of g_profile over x > 0: x* = A / (B - A). Requires B > A > 0.
inline double g_argmax(double A, double B) {
    if (!(A > 0.0) || !(B > A))
        throw DomainError("g_argmax requires B > A > 0");
    return A / (B - A);
}

/// Residual of the equality condition at power beta:
///   beta^{1-1/q} / (1+beta)^{1-1/r}  -  (1-1/p)^{1-1/p} (1-1/q)^{1-1/q} (1-1/r)^{-(1-1/r)}.
/// Zero exactly at beta = (1-1/q)/(1-1/p); nonpositive elsewhere, since
/// the left side is the profile g with A = 1-1/q, B = 1-1/r and beta*
/// is its argmax.
inline double equality_residual(double beta, const YoungTriple& t) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("equality_residual requires finite beta > 0");
    detail::validate_triple(t);
    const double px = 1.0 - t.p.reciprocal();
    const double qy = 1.0 - t.q.reciprocal();
    const double rz = 1.0 - t.r.reciprocal();
    const double lhs = std::exp(qy * std::log(beta) - rz * std::log1p(beta));
    const double rhs = std::exp(detail::xlogx(px) + detail::xlogx(qy) - detail::xlogx(rz));
    return lhs - rhs;
}

/// Defect of the closed-form identity tying the constants together:
///   (c_p c_q / c_r) (alpha_p alpha_q / alpha_r)^2
///     = (1-1/p)^{1-1/p} (1-1/q)^{1-1/q} (1-1/r)^{-(1-1/r)}.
/// Returns the absolute difference of the two sides.
inline double rhs_identity_check(const YoungTriple& t) {
    detail::validate_triple(t);
    const double x = t.p.reciprocal();
    const double y = t.q.reciprocal();
    const double z = t.r.reciprocal();
    const double left = std::exp(detail::log_c_from_reciprocal(x) +
                                 detail::log_c_from_reciprocal(y) -
                                 detail::log_c_from_reciprocal(z) +
                                 2.0 * (detail::log_alpha_from_reciprocal(x) +
                                        detail::log_alpha_from_reciprocal(y) -
                                        detail::log_alpha_from_reciprocal(z)));
    const double right = std::exp(detail::xlogx(1.0 - x) + detail::xlogx(1.0 - y) -
                                  detail::xlogx(1.0 - z));
    return std::fabs(left - right);
}

/// Everything the estimate needs for one exponent pair.
struct SharpConstants {
    YoungTriple triple;
    double c_p, c_q, c_r;
    double alpha_q;
    double young_constant; ///< C_{p,q}
    double heat_constant;  ///< K_{p,q} = C_{p,q} alpha_q
    double decay;          ///< (1 - 1/q)/2
    ExtremalBeta beta;
};

inline SharpConstants sharp_constants(Exponent p, Exponent q) {
    SharpConstants out{young_r(p, q), 0, 0, 0, 0, 0, 0, 0, extremal_beta(p, q)};
    out.c_p = c_constant(out.triple.p);
    out.c_q = c_constant(out.triple.q);
    out.c_r = c_constant(out.triple.r);
    out.alpha_q = alpha(q);
    out.young_constant = sharp_young_constant(p, q);
    out.heat_constant = heat_estimate_constant(p, q);
    out.decay = decay_exponent(q);
    return out;
}

} // namespace heatsharp
