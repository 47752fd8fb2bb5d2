#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "heatsharp/errors.hpp"

namespace heatsharp {

/// A Lebesgue exponent in [1, infinity]. Stored by its reciprocal 1/p,
/// which lives in [0, 1] with 0 meaning infinity, so that conjugation and
/// Young triple arithmetic are plain additions with exact endpoints.
class Exponent {
public:
    /// Finite exponent p >= 1.
    static Exponent finite(double p) {
        if (!(p >= 1.0) || !std::isfinite(p))
            throw DomainError("exponent must satisfy p >= 1, got " + std::to_string(p));
        return Exponent(1.0 / p);
    }

    static Exponent infinity() { return Exponent(0.0); }

    /// Build from a reciprocal in [0, 1]; 0 means infinity.
    static Exponent from_reciprocal(double r) {
        if (!(r >= 0.0 && r <= 1.0))
            throw DomainError("exponent reciprocal must lie in [0, 1], got " + std::to_string(r));
        return Exponent(r);
    }

    /// Accepts decimal text ("2", "1.5"), an exact fraction ("4/3"),
    /// or "inf". Fractions are evaluated as denominator/numerator in
    /// reciprocal space so no extra rounding step is introduced.
    static Exponent parse(std::string_view text);

    /// The reciprocal 1/p; the canonical stored value.
    double reciprocal() const { return recip_; }

    /// The exponent itself; +infinity for the endpoint.
    double value() const {
        return recip_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / recip_;
    }

    bool is_infinite() const { return recip_ == 0.0; }
    bool is_one() const { return recip_ == 1.0; }

    /// Round-trippable text form: shortest decimal, or "inf".
    std::string str() const {
        if (is_infinite()) return "inf";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", value());
        return buf;
    }

    friend bool operator==(Exponent a, Exponent b) { return a.recip_ == b.recip_; }
    friend bool operator!=(Exponent a, Exponent b) { return a.recip_ != b.recip_; }

private:
    explicit Exponent(double recip) : recip_(recip) {}
    double recip_;
};

/// Equality up to tol in reciprocal space.
inline bool approx_equal(Exponent a, Exponent b, double tol = 1e-14) {
    return std::fabs(a.reciprocal() - b.reciprocal()) <= tol;
}

/// The Holder conjugate p': 1/p + 1/p' = 1. Exact at the endpoints
/// (1 <-> infinity) and a fixed point at 2.
inline Exponent conjugate(Exponent p) {
    return Exponent::from_reciprocal(1.0 - p.reciprocal());
}

/// A Young-admissible exponent triple: 1 + 1/r = 1/p + 1/q.
struct YoungTriple {
    Exponent p, q, r;
};

namespace detail {
/// Slack below which 1/p + 1/q - 1 is treated as nonnegative. Fraction
/// inputs such as 4/3 place the sum within an ulp of 1.
inline constexpr double kTripleSlack = 1e-14;
} // namespace detail

/// Solves 1 + 1/r = 1/p + 1/q for r. Throws InvalidTriple when
/// 1/p + 1/q < 1 (no such r exists in [1, infinity]). Endpoint inputs
/// short-circuit so young_r(p, 1).r == p and young_r(1, q).r == q hold
/// exactly; r is infinite precisely when q is the conjugate of p.
inline YoungTriple young_r(Exponent p, Exponent q) {
    if (q.is_one()) return {p, q, p};
    if (p.is_one()) return {p, q, q};
    const double sum = p.reciprocal() + q.reciprocal();
    if (sum < 1.0 - detail::kTripleSlack)
        throw InvalidTriple("young_r(" + p.str() + ", " + q.str() +
                            "): requires 1/p + 1/q >= 1");
    double zr = sum - 1.0;
    if (zr < 0.0) zr = 0.0;
    if (zr > 1.0) zr = 1.0;
    return {p, q, Exponent::from_reciprocal(zr)};
}

inline Exponent Exponent::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    if (s.empty()) throw DomainError("empty exponent text");
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity")
        return infinity();

    auto to_double = [&](std::string_view part) {
        std::string owned(part);
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(owned, &used);
        } catch (const std::exception&) {
            throw DomainError("cannot parse exponent: '" + std::string(text) + "'");
        }
        if (used != owned.size())
            throw DomainError("cannot parse exponent: '" + std::string(text) + "'");
        return v;
    };

    const std::size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
        const double num = to_double(trim(s.substr(0, slash)));
        const double den = to_double(trim(s.substr(slash + 1)));
        if (!(num > 0.0) || !(den > 0.0))
            throw DomainError("fraction exponent needs positive terms: '" + std::string(text) + "'");
        const double recip = den / num;
        if (!(recip <= 1.0))
            throw DomainError("exponent must satisfy p >= 1, got " + std::string(text));
        return from_reciprocal(recip);
    }
    return finite(to_double(s));
}

} // namespace heatsharp
