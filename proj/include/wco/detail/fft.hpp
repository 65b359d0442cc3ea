#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "wco/errors.hpp"

namespace wco::detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 Cooley-Tukey transform,
///   a[k] <- sum_j a[j] * exp(sign * 2*pi*i * j*k / n).
/// All grids in this library are powers of two by construction, so a
/// general-length FFT dependency is not needed.
inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw ValidationError("fft size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

/// Forward DFT of samples f(w^j): bin n equals sum_j f_j * w^{-jn},
/// so bin n / M recovers the n-th Fourier coefficient of an analytic f.
inline void dft_forward(std::vector<std::complex<double>>& a) { fft_pow2(a, -1); }

} // namespace wco::detail
