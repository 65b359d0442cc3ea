#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "wco/detail/fft.hpp"
#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/exponent.hpp"

namespace wco {

inline constexpr std::size_t kDefaultGrid = std::size_t(1) << 14;
inline constexpr std::size_t kKernelGrid = std::size_t(1) << 16;
inline constexpr std::size_t kMaxGrid = std::size_t(1) << 22;
inline constexpr double kHardyRelTol = 1e-9;

/// M uniform samples of f on the circle of radius rho, value j being
/// f(rho e^{2 pi i j / M}).  Samples at singular boundary points are
/// flagged, not zeroed silently.
struct BoundaryGrid {
    std::size_t size = 0;
    double radius = 1.0;
    std::vector<cplx> values;
    std::vector<std::uint32_t> singular_indices;

    bool is_singular(std::size_t j) const {
        return std::find(singular_indices.begin(), singular_indices.end(),
                         static_cast<std::uint32_t>(j)) != singular_indices.end();
    }
};

inline cplx unit_root(std::size_t j, std::size_t M) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(M);
    return cplx(std::cos(theta), std::sin(theta));
}

/// Samples f on the radius-rho circle.  At rho = 1, samples that coincide
/// with a listed singular boundary point are flagged and left as zero.
inline BoundaryGrid boundary_trace(const DiscFunction& f, std::size_t M,
                                   double rho = 1.0) {
    if (!detail::is_power_of_two(M) || M < 2)
        throw ValidationError("grid size must be a power of two, >= 2");
    if (!(rho > 0.0) || rho > 1.0)
        throw ValidationError("trace radius must lie in (0, 1]");
    BoundaryGrid g;
    g.size = M;
    g.radius = rho;
    g.values.resize(M);
    if (rho >= 1.0 - 1e-15) {
        for (const cplx& s : f.singular_points()) {
            double frac = std::arg(s) / (2.0 * std::numbers::pi);
            frac -= std::floor(frac);
            const auto j = static_cast<std::uint32_t>(
                std::llround(frac * static_cast<double>(M)) % static_cast<long long>(M));
            g.singular_indices.push_back(j);
        }
    }
    for (std::size_t j = 0; j < M; ++j) {
        if (g.is_singular(j)) {
            g.values[j] = cplx(0.0, 0.0);
            continue;
        }
        g.values[j] = f.evaluate_unchecked(rho * unit_root(j, M));
    }
    return g;
}

/// f(r z) as a new tree.
inline DiscFunction radial_dilation(const DiscFunction& f, double r) {
    if (!(r > 0.0) || r >= 1.0)
        throw ValidationError("dilation radius must lie in (0, 1)");
    return DiscFunction::compose(f, DiscFunction::scalar_multiple(cplx(r, 0.0),
                                                                  DiscFunction::identity()));
}

namespace detail {

inline double abs_pow(double x, double p) {
    if (p == 1.0) return x;
    if (p == 2.0) return x * x;
    if (p == 4.0) { const double s = x * x; return s * s; }
    if (p == 0.5) return std::sqrt(x);
    return std::pow(x, p);
}

/// Mean of |f|^p over the M-point circle grid at radius rho, singular
/// samples dropped (their arc has measure <= count/M).  Long-double
/// accumulation keeps the 1e-9 doubling check meaningful at M = 2^20+.
inline double circle_mean_abs_pow(const DiscFunction& f, double p, std::size_t M,
                                  double rho, const std::vector<std::uint32_t>& skip) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < M; ++j) {
        if (!skip.empty() &&
            std::find(skip.begin(), skip.end(), static_cast<std::uint32_t>(j)) != skip.end())
            continue;
        acc += abs_pow(f.evaluate_abs_unchecked(rho * unit_root(j, M)), p);
    }
    return static_cast<double>(acc / static_cast<long double>(M));
}

inline std::vector<std::uint32_t> singular_indices_for(const DiscFunction& f,
                                                       std::size_t M, double rho) {
    std::vector<std::uint32_t> out;
    if (rho < 1.0 - 1e-15) return out;
    for (const cplx& s : f.singular_points()) {
        double frac = std::arg(s) / (2.0 * std::numbers::pi);
        frac -= std::floor(frac);
        out.push_back(static_cast<std::uint32_t>(
            std::llround(frac * static_cast<double>(M)) % static_cast<long long>(M)));
    }
    return out;
}

} // namespace detail

/// H^p norm by trapezoid quadrature of |f|^p on the unit circle (exact for
/// trigonometric polynomials of degree < M).  The grid doubles until two
/// consecutive sizes agree to kHardyRelTol; a genuinely divergent integral
/// raises NonConvergentError.  For p = inf, the grid maximum of |f|.
inline double hardy_norm(const DiscFunction& f, const Exponent& p,
                         std::size_t M = kDefaultGrid, double rel_tol = kHardyRelTol,
                         std::size_t max_M = kMaxGrid) {
    if (!detail::is_power_of_two(M) || M < 4)
        throw ValidationError("grid size must be a power of two, >= 4");
    const double rho = 1.0;
    if (p.is_infinite()) {
        const auto skip = detail::singular_indices_for(f, M, rho);
        double best = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            if (!skip.empty() &&
                std::find(skip.begin(), skip.end(), static_cast<std::uint32_t>(j)) != skip.end())
                continue;
            best = std::max(best, f.evaluate_abs_unchecked(unit_root(j, M)));
        }
        return best;
    }
    const double pv = p.value();
    double prev = detail::circle_mean_abs_pow(
        f, pv, M / 2, rho, detail::singular_indices_for(f, M / 2, rho));
    for (std::size_t m = M; m <= max_M; m *= 2) {
        const double cur = detail::circle_mean_abs_pow(
            f, pv, m, rho, detail::singular_indices_for(f, m, rho));
        const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        if (std::abs(cur - prev) <= rel_tol * scale)
            return std::pow(cur, 1.0 / pv);
        prev = cur;
    }
    throw NonConvergentError("hardy_norm did not stabilize under grid doubling");
}

/// An analytic self-map of the disk.  Construction checks |phi| < 1 on a
/// dense interior grid (the boundary trace may reach 1) and rejects
/// constant maps.
class SelfMap {
public:
    explicit SelfMap(DiscFunction map) : map_(std::move(map)) {
        const std::size_t angles = 128;
        std::vector<double> radii;
        for (int i = 1; i <= 9; ++i) radii.push_back(0.1 * i);
        for (int j = 4; j <= 16; ++j) radii.push_back(1.0 - std::pow(2.0, -j));
        double interior_max = 0.0;
        cplx first = map_.evaluate_unchecked(cplx(0.0, 0.0));
        bool varies = false;
        for (double r : radii) {
            for (std::size_t j = 0; j < angles; ++j) {
                const cplx z = r * unit_root(j, angles);
                const cplx w = map_.evaluate_unchecked(z);
                interior_max = std::max(interior_max, std::abs(w));
                if (std::abs(w - first) > 1e-12) varies = true;
            }
        }
        if (interior_max >= 1.0)
            throw ValidationError("not a self-map: |phi| reaches " +
                                  std::to_string(interior_max) + " inside the disk");
        if (!varies)
            throw ValidationError("self-map must be non-constant");
        double boundary_max = interior_max;
        const std::size_t bm = 4096;
        const auto skip = detail::singular_indices_for(map_, bm, 1.0);
        for (std::size_t j = 0; j < bm; ++j) {
            if (!skip.empty() &&
                std::find(skip.begin(), skip.end(), static_cast<std::uint32_t>(j)) != skip.end())
                continue;
            boundary_max = std::max(boundary_max, map_.evaluate_abs_unchecked(unit_root(j, bm)));
        }
        sup_modulus_ = std::min(boundary_max, 1.0);
    }

    const DiscFunction& map() const { return map_; }
    double sup_modulus_estimate() const { return sup_modulus_; }

    /// Whether the boundary trace reaches the circle (||phi||_inf = 1 up to
    /// the given slack).
    bool touches_boundary(double slack = 1e-6) const {
        return sup_modulus_ >= 1.0 - slack;
    }

    cplx operator()(cplx z) const { return map_.evaluate_unchecked(z); }

    SelfMap dilate(double r) const {
        SelfMap out(*this);
        out.map_ = radial_dilation(map_, r);
        out.sup_modulus_ = std::min(sup_modulus_, r);
        return out;
    }

private:
    DiscFunction map_;
    double sup_modulus_ = 0.0;
};

struct TaylorResult {
    std::vector<cplx> coefficients;
    double alias_bound = 0.0;  // estimated tail mass folded into low bins
};

/// Taylor coefficients 0..K from one FFT of a circle grid at radius rho,
/// coefficient n scaled by rho^{-n}.  The top half of the spectrum of an
/// analytic function holds only aliased tail; its largest bin is the
/// reported alias bound.
inline TaylorResult taylor_coefficients(const DiscFunction& f, std::size_t K,
                                        double rho, std::size_t M = 0,
                                        double alias_tol = 1e-7) {
    if (!(rho > 0.0) || rho > 1.0)
        throw ValidationError("sampling radius must lie in (0, 1]");
    if (rho >= 1.0 - 1e-15 && !f.singular_points().empty())
        throw ValidationError("radius-1 sampling requires a singularity-free trace");
    if (M == 0) {
        M = 4096;
        while (M < 4 * (K + 1)) M *= 2;
    }
    if (!detail::is_power_of_two(M))
        throw ValidationError("grid size must be a power of two");
    if (K >= M / 2)
        throw ValidationError("need K < M/2");
    std::vector<cplx> samples(M);
    for (std::size_t j = 0; j < M; ++j)
        samples[j] = f.evaluate_unchecked(rho * unit_root(j, M));
    detail::dft_forward(samples);
    TaylorResult out;
    out.coefficients.resize(K + 1);
    double top = 0.0;
    for (std::size_t n = M / 2; n < M; ++n)
        top = std::max(top, std::abs(samples[n]) / static_cast<double>(M));
    out.alias_bound = top;
    if (out.alias_bound > alias_tol)
        throw AliasingError("estimated coefficient tail " +
                            std::to_string(out.alias_bound) + " exceeds tolerance");
    double scale = 1.0;
    for (std::size_t n = 0; n <= K; ++n) {
        out.coefficients[n] = samples[n] / static_cast<double>(M) / scale;
        scale *= rho;
    }
    return out;
}

} // namespace wco
