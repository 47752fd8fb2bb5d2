#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include "heatsharp/detail/fft.hpp"
#include "heatsharp/detail/format.hpp"
#include "heatsharp/detail/parallel.hpp"
#include "heatsharp/detail/quadrature.hpp"
#include "heatsharp/errors.hpp"
#include "heatsharp/exponents.hpp"
#include "heatsharp/function_spec.hpp"

namespace heatsharp {

/// Uniform samples of a function on [x_lo, x_hi], plus an optional
/// analytic tail law for mass past the right edge. trusted_lo/hi bound
/// the index window whose values are unaffected by the zero extension
/// outside the grid (empty window when trusted_lo > trusted_hi).
struct GridFunction {
    double x_lo = 0.0, x_hi = 0.0, h = 0.0;
    std::vector<double> samples;
    std::optional<TailLaw> tail;
    std::size_t trusted_lo = 0, trusted_hi = 0;
    bool truncation_warning = false;

    std::size_t size() const { return samples.size(); }
    double x(std::size_t i) const { return x_lo + h * static_cast<double>(i); }
    bool trusted_empty() const { return trusted_lo > trusted_hi; }
};

/// Radius at which the evolution kernel is cut: Theta_t falls below
/// 1e-16 of its peak past m sqrt(t), m = 2 sqrt(16 log 10).
inline double kernel_truncation_radius(double t) {
    static const double m = 2.0 * std::sqrt(16.0 * std::log(10.0));
    return m * std::sqrt(t);
}

/// Samples the spec on n uniformly spaced points over [x_lo, x_hi].
/// A tail-bearing spec gets its analytic tail attached when the grid
/// reaches the tail region (x_hi >= e).
inline GridFunction sample(const FunctionSpec& spec, double x_lo, double x_hi, std::size_t n) {
    validate(spec);
    if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
        throw DomainError("sample requires finite x_lo < x_hi");
    if (n < 2)
        throw DomainError("sample requires n >= 2");
    GridFunction out;
    out.x_lo = x_lo;
    out.x_hi = x_hi;
    out.h = (x_hi - x_lo) / static_cast<double>(n - 1);
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = evaluate(spec, out.x(i));
    if (auto tail = spec_tail(spec); tail && x_hi >= std::numbers::e)
        out.tail = tail;
    out.trusted_lo = 0;
    out.trusted_hi = n - 1;
    return out;
}

namespace detail {

struct EvolveSetup {
    std::vector<double> kernel; ///< h-weighted kernel taps at offsets 0..D
    std::size_t D;
};

inline EvolveSetup evolve_setup(const GridFunction& f, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("heat_evolve requires t > 0");
    if (f.size() < 2 || !(f.h > 0.0))
        throw DomainError("heat_evolve requires a sampled grid");
    const double radius = kernel_truncation_radius(t);
    std::size_t D = static_cast<std::size_t>(std::ceil(radius / f.h));
    if (D < 1) D = 1;
    EvolveSetup s;
    s.D = D;
    s.kernel.resize(D + 1);
    const double norm = 1.0 / (2.0 * std::sqrt(std::numbers::pi * t));
    for (std::size_t d = 0; d <= D; ++d) {
        const double x = static_cast<double>(d) * f.h;
        s.kernel[d] = f.h * norm * std::exp(-x * x / (4.0 * t));
    }
    s.kernel[D] *= 0.5; // trapezoid end weight at the cut radius
    return s;
}

inline void evolve_flags(const GridFunction& f, double t, std::size_t D, GridFunction& out) {
    out.x_lo = f.x_lo;
    out.x_hi = f.x_hi;
    out.h = f.h;
    out.tail = std::nullopt;
    out.truncation_warning = kernel_truncation_radius(t) > 0.5 * (f.x_hi - f.x_lo);
    const std::size_t n = f.size();
    if (2 * D < n - 1) {
        out.trusted_lo = D;
        out.trusted_hi = n - 1 - D;
    } else {
        out.trusted_lo = 1;
        out.trusted_hi = 0;
    }
}

} // namespace detail

/// Convolution with the heat kernel by direct trapezoid quadrature. The
/// input is extended by zero outside its grid; the kernel is truncated
/// at kernel_truncation_radius(t) with half weight on the end taps. Each
/// output sample is accumulated in a fixed order, so results do not
/// depend on the worker count.
inline GridFunction heat_evolve(const GridFunction& f, double t) {
    const detail::EvolveSetup s = detail::evolve_setup(f, t);
    const std::size_t n = f.size();
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    const std::ptrdiff_t D = static_cast<std::ptrdiff_t>(s.D);
    GridFunction out;
    detail::evolve_flags(f, t, s.D, out);
    out.samples.assign(n, 0.0);

    const double* fs = f.samples.data();
    const double* ks = s.kernel.data();
    double* os = out.samples.data();
    detail::parallel_for_ranges(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t iu = begin; iu < end; ++iu) {
            const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(iu);
            double acc = ks[0] * fs[i];
            for (std::ptrdiff_t d = 1; d <= D; ++d) {
                const double left = i - d >= 0 ? fs[i - d] : 0.0;
                const double right = i + d < sn ? fs[i + d] : 0.0;
                acc += ks[d] * (left + right);
            }
            os[iu] = acc;
        }
    });
    return out;
}

/// Same discrete operator as heat_evolve (same taps, cut, and zero
/// extension), evaluated spectrally. Agrees with the direct path to
/// roundoff; kept as an independent route for cross-checking.
inline GridFunction heat_evolve_fft(const GridFunction& f, double t) {
    const detail::EvolveSetup s = detail::evolve_setup(f, t);
    const std::size_t n = f.size();
    GridFunction out;
    detail::evolve_flags(f, t, s.D, out);

    std::vector<double> taps(2 * s.D + 1);
    for (std::size_t j = 0; j < taps.size(); ++j) {
        const std::size_t d = j >= s.D ? j - s.D : s.D - j;
        taps[j] = s.kernel[d];
    }
    const std::vector<double> conv = detail::convolve_linear_fft(f.samples, taps);
    out.samples.assign(conv.begin() + static_cast<std::ptrdiff_t>(s.D),
                       conv.begin() + static_cast<std::ptrdiff_t>(s.D + n));
    return out;
}

namespace detail {

/// Integral of (weight * x^{-1/p_tail} log^{-2} x)^p over [X, infinity)
/// for X >= e, via u = log x. Infinite when p is below the tail
/// exponent; exact closed form at equality.
inline double tail_power_integral(const TailLaw& tail, double X, double p) {
    const double u0 = std::log(X);
    if (!(u0 >= 1.0))
        throw DomainError("tail integral requires X >= e");
    const double decay = p * tail.p.reciprocal() - 1.0; // integrand is exp(-decay u) u^{-2p}
    const double wpow = std::pow(std::fabs(tail.weight), p);
    if (decay < -1e-12) return std::numeric_limits<double>::infinity();
    if (std::fabs(decay) <= 1e-12)
        return wpow * std::pow(u0, 1.0 - 2.0 * p) / (2.0 * p - 1.0);
    const double span = 60.0 / decay;
    auto integrand = [&](double v) {
        return std::exp(-decay * v - 2.0 * p * std::log(u0 + v));
    };
    const double scale = std::exp(-2.0 * p * std::log(u0)) / decay;
    const double iv = adaptive_simpson(integrand, 0.0, span, 1e-14 * scale);
    return wpow * std::exp(-decay * u0) * iv;
}

} // namespace detail

/// L^p norm of the sampled function: trapezoid rule on |f|^p plus the
/// analytic tail integral when a tail law is attached. Returns +infinity
/// when the tail makes the norm diverge. The sup norm is the max of
/// sample magnitudes and the tail's value at the right edge.
inline double lp_norm_grid(const GridFunction& f, Exponent p) {
    if (f.size() < 2 || !(f.h > 0.0))
        throw DomainError("lp_norm_grid requires a sampled grid");
    if (p.is_infinite()) {
        double m = 0.0;
        for (double v : f.samples) m = std::max(m, std::fabs(v));
        if (f.tail) {
            const double lx = std::log(f.x_hi);
            m = std::max(m, std::fabs(f.tail->weight) *
                                std::exp(-f.tail->p.reciprocal() * lx - 2.0 * std::log(lx)));
        }
        return m;
    }
    const double pv = p.value();
    double sum = 0.0;
    for (double v : f.samples) sum += std::pow(std::fabs(v), pv);
    sum -= 0.5 * (std::pow(std::fabs(f.samples.front()), pv) +
                  std::pow(std::fabs(f.samples.back()), pv));
    sum *= f.h;
    if (f.tail) {
        const double t = detail::tail_power_integral(*f.tail, f.x_hi, pv);
        if (std::isinf(t)) return t;
        sum += t;
    }
    return std::pow(sum, 1.0 / pv);
}

/// Linear interpolation of the samples at x inside [x_lo, x_hi].
inline double value_at(const GridFunction& f, double x) {
    if (f.size() < 2 || !(f.h > 0.0))
        throw DomainError("value_at requires a sampled grid");
    if (!(x >= f.x_lo) || !(x <= f.x_hi))
        throw DomainError("value_at: x outside the grid");
    double idx = (x - f.x_lo) / f.h;
    std::size_t i = static_cast<std::size_t>(idx);
    if (i >= f.size() - 1) i = f.size() - 2;
    const double theta = (x - f.x(i)) / f.h;
    return f.samples[i] * (1.0 - theta) + f.samples[i + 1] * theta;
}

/// L^p distance of two functions on one and the same grid (samples only;
/// tails are ignored).
inline double diff_lp_norm(const GridFunction& a, const GridFunction& b, Exponent p) {
    if (a.size() != b.size() || a.x_lo != b.x_lo || a.h != b.h)
        throw DomainError("diff_lp_norm requires identical grids");
    if (p.is_infinite()) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            m = std::max(m, std::fabs(a.samples[i] - b.samples[i]));
        return m;
    }
    const double pv = p.value();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += std::pow(std::fabs(a.samples[i] - b.samples[i]), pv);
    sum -= 0.5 * (std::pow(std::fabs(a.samples.front() - b.samples.front()), pv) +
                  std::pow(std::fabs(a.samples.back() - b.samples.back()), pv));
    return std::pow(sum * a.h, 1.0 / pv);
}

/// Max over [x_lo, x_hi] of |d/dt u - d^2/dx^2 u| for u = spec evolved
/// to time t, with centered differences (spacing h in x, delta in t).
/// The evolution grid is padded by the kernel radius so every stencil
/// point is trusted.
inline double pde_residual(const FunctionSpec& spec, double t, double x_lo, double x_hi,
                           double h, double delta) {
    if (!(h > 0.0) || !(delta > 0.0) || !(t - delta > 0.0))
        throw DomainError("pde_residual requires h > 0, delta > 0, t > delta");
    if (!(x_lo < x_hi))
        throw DomainError("pde_residual requires x_lo < x_hi");
    const double margin = kernel_truncation_radius(t + delta) + 2.0 * h;
    const double glo = x_lo - margin;
    const std::size_t n =
        static_cast<std::size_t>(std::ceil((x_hi + margin - glo) / h)) + 1;
    const double ghi = glo + h * static_cast<double>(n - 1);
    const GridFunction f = sample(spec, glo, ghi, n);
    const GridFunction um = heat_evolve(f, t - delta);
    const GridFunction u0 = heat_evolve(f, t);
    const GridFunction up = heat_evolve(f, t + delta);

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = f.x(i);
        if (x < x_lo || x > x_hi) continue;
        const double uxx =
            (u0.samples[i - 1] - 2.0 * u0.samples[i] + u0.samples[i + 1]) / (h * h);
        const double ut = (up.samples[i] - um.samples[i]) / (2.0 * delta);
        worst = std::max(worst, std::fabs(ut - uxx));
    }
    return worst;
}

/// For f nonnegative and nonincreasing on [c, infinity), the evolved
/// value obeys u_t(x) >= f(x) * erf((x-c)/(2 sqrt(t))) / 2 for x >= c.
/// This is that factor; zero at x = c.
inline double monotone_tail_bound_factor(double x, double c, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("monotone_tail_bound_factor requires t > 0");
    if (!(x >= c))
        throw DomainError("monotone_tail_bound_factor requires x >= c");
    return 0.5 * std::erf((x - c) / (2.0 * std::sqrt(t)));
}

/// Two-column CSV: x,value with round-trippable doubles.
inline void write_csv(const GridFunction& f, std::ostream& os) {
    os << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        os << detail::fmt_double(f.x(i)) << ',' << detail::fmt_double(f.samples[i]) << '\n';
}

} // namespace heatsharp
