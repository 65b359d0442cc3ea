#pragma once

#include <cmath>
#include <complex>

#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/exponent.hpp"
#include "wco/funcspace.hpp"

namespace wco {

/// k_a(z) = (1-|a|^2)/(1 - conj(a) z)^2.  |k_a| on the circle is the
/// Poisson kernel at a; the pole 1/conj(a) lies outside the closed disk.
inline DiscFunction reproducing_kernel(cplx a) { return DiscFunction::kernel(a); }

/// k_a^{1/p}, a unit vector of H^p.
inline DiscFunction kernel_power(cplx a, const Exponent& p) {
    return DiscFunction::kernel_power(a, 1.0 / p.value());
}

inline DiscFunction cauchy_kernel(cplx w) { return DiscFunction::cauchy_kernel(w); }

/// Norm of the evaluation functional f -> f(w) on H^p: (1-|w|^2)^{-1/p}.
inline double delta_norm(cplx w, const Exponent& p) {
    const double m2 = std::norm(w);
    if (m2 >= 1.0) throw OutsideDomainError("delta_norm requires |w| < 1");
    return std::pow(1.0 - m2, -1.0 / p.value());
}

/// rho(z, w) = |z - w| / |1 - conj(w) z|, in [0, 1) for disk points.
inline double pseudohyperbolic(cplx z, cplx w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
        throw OutsideDomainError("pseudohyperbolic distance requires |z|, |w| < 1");
    return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

/// Interior of the convex hull of {zeta} and the centered disk of radius
/// alpha: the nontangential approach region with vertex zeta.
struct StolzDomain {
    cplx vertex;
    double aperture;

    StolzDomain(cplx zeta, double alpha) : vertex(zeta), aperture(alpha) {
        const double m = std::abs(zeta);
        if (std::abs(m - 1.0) > 1e-9)
            throw ValidationError("Stolz vertex must be unimodular");
        vertex /= m;
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw ValidationError("aperture must lie in (0, 1)");
    }
};

/// Membership via the one-dimensional minimization of
///   g(t) = |z - (1-t) zeta| - t alpha  over  t in (0, 1];
/// the hull is {(1-t) zeta + t w : t in [0,1], |w| <= alpha} and z is
/// interior iff min g < 0.  The interior stationary point is closed-form.
inline bool stolz_contains(const StolzDomain& gamma, cplx z) {
    if (std::abs(z) > 1.0 + 1e-12)
        throw OutsideDomainError("stolz_contains requires |z| <= 1");
    const double alpha = gamma.aperture;
    const cplx w = z - gamma.vertex;
    const double w2 = std::norm(w);
    const double b = (w * std::conj(gamma.vertex)).real();
    auto g = [&](double t) {
        return std::sqrt(std::max(0.0, w2 + 2.0 * b * t + t * t)) - alpha * t;
    };
    // t = 1 covers the disk part (g(1) = |z| - alpha)
    double best = g(1.0);
    const double disc = w2 - b * b;
    if (disc >= 0.0) {
        const double t_star = -b + alpha * std::sqrt(disc / (1.0 - alpha * alpha));
        if (t_star > 0.0 && t_star < 1.0) best = std::min(best, g(t_star));
    }
    return best < 0.0;
}

/// Fraction of the M grid vertices zeta whose Stolz domain contains z;
/// approximates the measure of the shadow {zeta : z in Gamma(zeta)},
/// which is comparable to 1 - |z|.
inline double shadow_measure(cplx z, double alpha, std::size_t M = 4096) {
    std::size_t hits = 0;
    for (std::size_t j = 0; j < M; ++j)
        if (stolz_contains(StolzDomain(unit_root(j, M), alpha), z)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(M);
}

} // namespace wco
