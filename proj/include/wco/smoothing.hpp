#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/exponent.hpp"

namespace wco {

/// Finite Taylor coefficient sequence indexed from 0.  Trailing zeros are
/// permitted and preserved.
using CoefficientVector = std::vector<cplx>;

/// Fejer means: coefficient n -> (1 - n/N) c_n for n < N, 0 beyond.
inline CoefficientVector fejer_apply(const CoefficientVector& c, std::size_t N) {
    if (N < 1) throw ValidationError("fejer order must be >= 1");
    CoefficientVector out(c.size(), cplx(0.0, 0.0));
    for (std::size_t n = 0; n < c.size() && n < N; ++n)
        out[n] = (1.0 - static_cast<double>(n) / static_cast<double>(N)) * c[n];
    return out;
}

/// The complement I - K_N: coefficient n -> (n/N) c_n for n < N, c_n beyond.
inline CoefficientVector fejer_remainder(const CoefficientVector& c, std::size_t N) {
    if (N < 1) throw ValidationError("fejer order must be >= 1");
    CoefficientVector out = c;
    for (std::size_t n = 0; n < c.size() && n < N; ++n)
        out[n] = (static_cast<double>(n) / static_cast<double>(N)) * c[n];
    return out;
}

/// Partial sum (Dirichlet) truncation at degree N.  Unlike the Fejer
/// means this is not uniformly bounded on H^1, so it is kept only for the
/// 1 < p < inf comparison path.
inline CoefficientVector dirichlet_apply(const CoefficientVector& c, std::size_t N) {
    CoefficientVector out(c.begin(),
                          c.begin() + static_cast<std::ptrdiff_t>(
                                          std::min(c.size(), N + 1)));
    if (out.empty()) out.push_back(cplx(0.0, 0.0));
    return out;
}

/// Closed form of (1/N) sum_{n=1}^{N-1} n r^n + r^N / (1-r), the uniform
/// bound on |R_N K_w| over |w| <= r.
inline double remainder_sup_bound(double r, std::size_t N) {
    if (!(r > 0.0) || !(r < 1.0)) throw ValidationError("need 0 < r < 1");
    if (N < 1) throw ValidationError("need N >= 1");
    const double Nd = static_cast<double>(N);
    // sum_{n=1}^{N-1} n r^n = r (1 - N r^{N-1} + (N-1) r^N) / (1-r)^2
    const double rN1 = std::pow(r, Nd - 1.0);
    const double rN = rN1 * r;
    const double partial = r * (1.0 - Nd * rN1 + (Nd - 1.0) * rN) / ((1.0 - r) * (1.0 - r));
    return partial / Nd + rN / (1.0 - r);
}

/// Smallest N with r^N <= eps^{1/q} (1-r)/2 and
/// (1/N) sum_{n=1}^{N-1} n r^n <= eps^{1/q} / 2.
inline std::size_t choose_N(double r, double eps, const Exponent& q) {
    if (!(r > 0.0) || !(r < 1.0)) throw ValidationError("need 0 < r < 1");
    if (!(eps > 0.0)) throw ValidationError("need eps > 0");
    const double target = std::pow(eps, 1.0 / q.value());
    for (std::size_t N = 1;; ++N) {
        const double Nd = static_cast<double>(N);
        const double rN = std::pow(r, Nd);
        const double rN1 = std::pow(r, Nd - 1.0);
        const double partial =
            r * (1.0 - Nd * rN1 + (Nd - 1.0) * rN) / ((1.0 - r) * (1.0 - r));
        if (rN <= target * (1.0 - r) / 2.0 && partial / Nd <= target / 2.0)
            return N;
        if (N > 100000000)
            throw NoConvergenceError("choose_N exceeded its search cap");
    }
}

/// The polynomial with the given coefficients, for feeding coefficient-space
/// results back into circle quadrature.
inline DiscFunction to_function(const CoefficientVector& c) {
    return DiscFunction::polynomial(c);
}

} // namespace wco
