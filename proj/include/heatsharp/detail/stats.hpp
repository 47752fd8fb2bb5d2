#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "heatsharp/errors.hpp"

namespace heatsharp::detail {

struct LineFit {
    double slope;
    double intercept;
};

/// Ordinary least squares line through (x_i, y_i), computed about the
/// mean for conditioning. Requires two or more points and nonconstant x.
inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("least_squares_line needs matching inputs with >= 2 points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw DomainError("least_squares_line needs nonconstant abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

} // namespace heatsharp::detail
