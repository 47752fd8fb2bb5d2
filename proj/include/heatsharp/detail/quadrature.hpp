#pragma once

#include <cmath>
#include <limits>

namespace heatsharp::detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // A delta at the rounding noise of the local sums (or a degenerate
    // midpoint) means refinement is over: splitting further only blows
    // up the recursion tree chasing an unattainable tolerance.
    const double noise =
        2.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= noise || m == a ||
        m == b)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance
/// tol. Deterministic: the refinement pattern depends only on the
/// integrand values.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace heatsharp::detail
