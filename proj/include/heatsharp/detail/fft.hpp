#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "heatsharp/errors.hpp"

namespace heatsharp::detail {

/// In-place iterative radix-2 FFT. Size must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw DomainError("fft size must be a nonzero power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double pi = std::acos(-1.0);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

/// Full linear convolution of two real sequences, length |f|+|g|-1.
inline std::vector<double> convolve_linear_fft(const std::vector<double>& f,
                                               const std::vector<double>& g) {
    if (f.empty() || g.empty())
        throw DomainError("convolve_linear_fft requires nonempty inputs");
    const std::size_t need = f.size() + g.size() - 1;
    std::size_t n = 1;
    while (n < need) n <<= 1;

    std::vector<std::complex<double>> fa(n), ga(n);
    for (std::size_t i = 0; i < f.size(); ++i) fa[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] = g[i];
    fft_inplace(fa, false);
    fft_inplace(ga, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= ga[i];
    fft_inplace(fa, true);

    std::vector<double> out(need);
    for (std::size_t i = 0; i < need; ++i) out[i] = fa[i].real();
    return out;
}

} // namespace heatsharp::detail
