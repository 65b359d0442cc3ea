#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/exponent.hpp"
#include "wco/funcspace.hpp"
#include "wco/kernels.hpp"

namespace wco {

inline constexpr double kBoundaryThreshold = 1.0 - 1e-6;

struct MeasureAtom {
    cplx location;   // |location| <= 1
    double weight;   // >= 0
};

/// Atomic approximation of the pullback of |u|^q dm under the boundary map
/// of phi: one atom per circle sample, location phi*(zeta_j), weight
/// |u*(zeta_j)|^q / M.  Atoms at |location| >= boundary_threshold form the
/// boundary part; rational maps send grid points either exactly to the
/// circle or strictly inside, and the threshold absorbs rounding.
struct PullbackMeasure {
    std::vector<MeasureAtom> atoms;
    double boundary_threshold = kBoundaryThreshold;
    std::vector<std::size_t> interior_part;
    std::vector<std::size_t> boundary_part;
    double total_mass = 0.0;
    std::size_t excluded_samples = 0;  // singular samples dropped, error budget

    // provenance, when built by pullback(): enables grid-doubling stability checks
    std::optional<DiscFunction> source_u;
    std::optional<DiscFunction> source_phi;
    std::optional<double> source_q;
    std::size_t source_grid = 0;

    void rebuild_parts() {
        interior_part.clear();
        boundary_part.clear();
        total_mass = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            total_mass += atoms[i].weight;
            if (std::abs(atoms[i].location) >= boundary_threshold)
                boundary_part.push_back(i);
            else
                interior_part.push_back(i);
        }
    }

    double interior_mass() const {
        double s = 0.0;
        for (std::size_t i : interior_part) s += atoms[i].weight;
        return s;
    }

    double boundary_mass() const {
        double s = 0.0;
        for (std::size_t i : boundary_part) s += atoms[i].weight;
        return s;
    }
};

inline PullbackMeasure pullback(const DiscFunction& u, const SelfMap& phi,
                                const Exponent& q, std::size_t M = kDefaultGrid,
                                double boundary_threshold = kBoundaryThreshold) {
    const double qv = q.value();
    PullbackMeasure mu;
    mu.boundary_threshold = boundary_threshold;
    mu.atoms.reserve(M);
    const auto skip_u = detail::singular_indices_for(u, M, 1.0);
    const auto skip_phi = detail::singular_indices_for(phi.map(), M, 1.0);
    for (std::size_t j = 0; j < M; ++j) {
        const bool bad =
            (!skip_u.empty() &&
             std::find(skip_u.begin(), skip_u.end(), static_cast<std::uint32_t>(j)) !=
                 skip_u.end()) ||
            (!skip_phi.empty() &&
             std::find(skip_phi.begin(), skip_phi.end(), static_cast<std::uint32_t>(j)) !=
                 skip_phi.end());
        if (bad) {
            ++mu.excluded_samples;
            continue;
        }
        const cplx zeta = unit_root(j, M);
        cplx loc = phi.map().evaluate_unchecked(zeta);
        const double m = std::abs(loc);
        if (m > 1.0 + 1e-9)
            throw ValidationError("pullback: |phi*| exceeds 1 beyond rounding");
        if (m > 1.0) loc /= m;
        const double w =
            detail::abs_pow(u.evaluate_abs_unchecked(zeta), qv) / static_cast<double>(M);
        mu.atoms.push_back({loc, w});
    }
    mu.source_u = u;
    mu.source_phi = phi.map();
    mu.source_q = qv;
    mu.source_grid = M;
    mu.rebuild_parts();
    return mu;
}

/// A boundary arc given by center angle (radians) and normalized length
/// in (0, 1].
struct Arc {
    double center;
    double length;
};

namespace detail {

inline double wrap_unit(double x) {
    x -= std::floor(x);
    return x;  // in [0, 1)
}

} // namespace detail

/// Mass of the Carleson window S(I) = {1-|I| <= |z| < 1, z/|z| in I}.
/// Boundary-part atoms are excluded: the window is a subset of the open disk.
inline double window_mass(const PullbackMeasure& mu, const Arc& I) {
    if (!(I.length > 0.0) || I.length > 1.0)
        throw ValidationError("arc length must lie in (0, 1]");
    const double rmin = 1.0 - I.length;
    const double half = I.length / 2.0;
    const double c = detail::wrap_unit(I.center / (2.0 * std::numbers::pi));
    double mass = 0.0;
    for (std::size_t i : mu.interior_part) {
        const MeasureAtom& a = mu.atoms[i];
        const double r = std::abs(a.location);
        if (r < rmin) continue;
        double t = detail::wrap_unit(std::arg(a.location) / (2.0 * std::numbers::pi)) - c;
        t -= std::round(t);  // circular distance in [-1/2, 1/2]
        if (std::abs(t) <= half) mass += a.weight;
    }
    return mass;
}

struct CarlesonReport {
    double ratio_sup = 0.0;
    Arc witness{0.0, 1.0};
    double exponent_ratio = 1.0;  // q/p
    int arc_family_depth = 0;
};

/// sup over a dyadic arc family of window mass / |I|^{q/p}: arcs centered
/// at all M grid angles with lengths 2^-1 .. 2^-depth, plus the full arc.
/// This family 2-approximates the supremum over all arcs; the report is an
/// approximation, never the exact sup.
inline CarlesonReport ratio_sup(const PullbackMeasure& mu, const Exponent& p,
                                const Exponent& q, int depth,
                                std::size_t centers = kDefaultGrid) {
    if (depth < 1) throw ValidationError("arc family depth must be >= 1");
    const double e = q.value() / p.value();
    CarlesonReport rep;
    rep.exponent_ratio = e;
    rep.arc_family_depth = depth;
    rep.ratio_sup = mu.interior_mass();  // full arc: |I| = 1
    rep.witness = Arc{0.0, 1.0};

    // atoms sorted by angle once; per level a radius cut and a circular
    // two-pointer sweep over the centered windows
    struct AtomAngle {
        double theta;  // normalized angle in [0,1)
        double radius;
        double weight;
    };
    std::vector<AtomAngle> sorted;
    sorted.reserve(mu.interior_part.size());
    for (std::size_t i : mu.interior_part) {
        const MeasureAtom& a = mu.atoms[i];
        sorted.push_back({detail::wrap_unit(std::arg(a.location) / (2.0 * std::numbers::pi)),
                          std::abs(a.location), a.weight});
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const AtomAngle& x, const AtomAngle& y) { return x.theta < y.theta; });

    std::vector<AtomAngle> level = sorted;
    for (int d = 1; d <= depth; ++d) {
        const double len = std::pow(0.5, d);
        const double rmin = 1.0 - len;
        // shrink to atoms surviving this level's radius cut (cuts only grow)
        std::vector<AtomAngle> kept;
        kept.reserve(level.size());
        for (const AtomAngle& a : level)
            if (a.radius >= rmin) kept.push_back(a);
        level.swap(kept);
        if (level.empty()) continue;
        const double denom = std::pow(len, e);
        const double half = len / 2.0;
        // unroll the circle onto a line (theta - 1, theta, theta + 1) so a
        // monotone two-pointer sweep handles windows that wrap
        std::vector<double> pos, wt;
        pos.reserve(3 * level.size());
        wt.reserve(3 * level.size());
        for (int blk = -1; blk <= 1; ++blk)
            for (const AtomAngle& a : level) {
                pos.push_back(a.theta + static_cast<double>(blk));
                wt.push_back(a.weight);
            }
        std::size_t lo = 0, hi = 0;
        double acc = 0.0;
        for (std::size_t jc = 0; jc < centers; ++jc) {
            const double c = static_cast<double>(jc) / static_cast<double>(centers);
            while (hi < pos.size() && pos[hi] <= c + half) {
                acc += wt[hi];
                ++hi;
            }
            while (lo < hi && pos[lo] < c - half) {
                acc -= wt[lo];
                ++lo;
            }
            const double ratio = acc / denom;
            if (ratio > rep.ratio_sup) {
                rep.ratio_sup = ratio;
                rep.witness = Arc{2.0 * std::numbers::pi * c, len};
            }
        }
    }
    return rep;
}

/// Restriction to the closed annulus {|z| >= r}.
inline PullbackMeasure restrict_annulus(const PullbackMeasure& mu, double r) {
    if (!(r > 0.0) || !(r < 1.0)) throw ValidationError("need 0 < r < 1");
    PullbackMeasure out;
    out.boundary_threshold = mu.boundary_threshold;
    out.excluded_samples = mu.excluded_samples;
    for (const MeasureAtom& a : mu.atoms)
        if (std::abs(a.location) >= r) out.atoms.push_back(a);
    out.rebuild_parts();
    return out;
}

/// Builds n uniformly spaced ring points of modulus r.
inline std::vector<cplx> ring_points(double r, std::size_t n) {
    std::vector<cplx> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(r * unit_root(j, n));
    return out;
}

/// N_r^* = sup over the ring of int |k_a|^{q/p} d mu.
inline double n_star(const PullbackMeasure& mu, double r, const Exponent& p,
                     const Exponent& q, const std::vector<cplx>& ring) {
    const double e = q.value() / p.value();
    double best = 0.0;
    for (const cplx& a : ring) {
        if (std::abs(a) < r - 1e-12)
            throw ValidationError("n_star ring point with |a| < r");
        const double na = std::norm(a);
        long double acc = 0.0L;
        for (const MeasureAtom& at : mu.atoms) {
            const double ratio = (1.0 - na) / std::norm(1.0 - std::conj(a) * at.location);
            acc += at.weight * detail::abs_pow(ratio, e);
        }
        best = std::max(best, static_cast<double>(acc));
    }
    return best;
}

/// Balayage of the interior part through the Stolz domain at zeta:
/// G(zeta) = sum over atoms in Gamma(zeta, alpha) of weight / (1 - |z|^2).
inline double balayage_G(const PullbackMeasure& mu, cplx zeta, double alpha) {
    const StolzDomain gamma(zeta, alpha);
    long double acc = 0.0L;
    for (std::size_t i : mu.interior_part) {
        const MeasureAtom& a = mu.atoms[i];
        if (stolz_contains(gamma, a.location))
            acc += a.weight / (1.0 - std::norm(a.location));
    }
    return static_cast<double>(acc);
}

/// Discrete L^s norm of G over M boundary vertices.
inline double ls_norm_G(const PullbackMeasure& mu, double s, double alpha,
                        std::size_t M = 512) {
    if (!(s > 0.0)) throw ValidationError("need s > 0");
    long double acc = 0.0L;
    for (std::size_t j = 0; j < M; ++j)
        acc += detail::abs_pow(balayage_G(mu, unit_root(j, M), alpha), s);
    return static_cast<double>(std::pow(acc / static_cast<long double>(M),
                                        static_cast<long double>(1.0 / s)));
}

struct BoundaryDensity {
    std::vector<double> density;  // F on the M grid cells
    double ls_norm = 0.0;
    double linf = 0.0;
};

/// Bins boundary atoms by angle into M cells; F = cell mass * M is the
/// discrete density of the boundary part against dm.
inline BoundaryDensity boundary_density(const PullbackMeasure& mu, double s,
                                        std::size_t M = kDefaultGrid) {
    BoundaryDensity out;
    out.density.assign(M, 0.0);
    for (std::size_t i : mu.boundary_part) {
        const MeasureAtom& a = mu.atoms[i];
        const double frac = detail::wrap_unit(std::arg(a.location) / (2.0 * std::numbers::pi));
        auto cell = static_cast<std::size_t>(frac * static_cast<double>(M));
        if (cell >= M) cell = M - 1;
        out.density[cell] += a.weight * static_cast<double>(M);
    }
    long double acc = 0.0L;
    for (double f : out.density) {
        acc += detail::abs_pow(f, s);
        out.linf = std::max(out.linf, f);
    }
    out.ls_norm = static_cast<double>(std::pow(acc / static_cast<long double>(M),
                                               static_cast<long double>(1.0 / s)));
    return out;
}

struct CarlesonCertificate {
    bool is_carleson = false;
    std::string regime;  // "p<q" | "p=q" | "p>q"
    double boundary_mass = 0.0;
    double ratio_sup_value = 0.0;
    double ratio_sup_refined = 0.0;
    double g_ls_norm = 0.0;
    double g_ls_norm_refined = 0.0;
    double density_ls_norm = 0.0;
    double density_ls_norm_refined = 0.0;
    double s = 0.0;
    double alpha = 0.0;
    std::string note;  // symbolic factors the paper leaves abstract
};

namespace detail {

inline bool stable(double a, double b, double rel = 0.05) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) <= rel * scale;
}

inline PullbackMeasure rebuild_doubled(const PullbackMeasure& mu) {
    if (!mu.source_u || !mu.source_phi || !mu.source_q || mu.source_grid == 0)
        return mu;  // no provenance: stability falls back to depth only
    return pullback(*mu.source_u, SelfMap(*mu.source_phi),
                    Exponent::finite(*mu.source_q), mu.source_grid * 2,
                    mu.boundary_threshold);
}

} // namespace detail

/// (p,q)-Carleson classification of a pullback measure on the closed disk.
///  p < q : boundary part must vanish and the window ratio sup must be
///          stable under one grid doubling and one depth increment.
///  p = q : classical window test with exponent 1 plus a bounded boundary
///          density.
///  p > q : the balayage function G must have a stable L^s norm and the
///          boundary part a stable L^s density, s = p/(p-q).
/// Throws UndecidedError when the stability checks diverge.
inline CarlesonCertificate classify_carleson(const PullbackMeasure& mu,
                                             const Exponent& p, const Exponent& q,
                                             int depth = 12, double alpha = 0.5,
                                             double boundary_tol = 1e-9) {
    const double pv = p.value();
    const double qv = q.value();
    CarlesonCertificate cert;
    cert.alpha = alpha;
    if (mu.atoms.empty()) {
        cert.is_carleson = true;
        cert.regime = pv < qv ? "p<q" : (pv > qv ? "p>q" : "p=q");
        return cert;
    }
    const PullbackMeasure doubled = detail::rebuild_doubled(mu);
    const std::size_t centers = std::max<std::size_t>(mu.source_grid, 1024);
    if (pv < qv) {
        cert.regime = "p<q";
        cert.boundary_mass = mu.boundary_mass();
        cert.ratio_sup_value = ratio_sup(mu, p, q, depth, centers).ratio_sup;
        const double deeper = ratio_sup(mu, p, q, depth + 1, centers).ratio_sup;
        cert.ratio_sup_refined = ratio_sup(doubled, p, q, depth, centers * 2).ratio_sup;
        const bool boundary_ok = cert.boundary_mass <= boundary_tol;
        const bool stable = detail::stable(cert.ratio_sup_value, deeper) &&
                            detail::stable(cert.ratio_sup_value, cert.ratio_sup_refined);
        if (!boundary_ok) {
            cert.is_carleson = false;
            return cert;
        }
        if (!stable)
            throw UndecidedError("window ratio sup not stable under refinement");
        cert.is_carleson = true;
        return cert;
    }
    if (pv == qv) {
        cert.regime = "p=q";
        cert.ratio_sup_value = ratio_sup(mu, p, q, depth, centers).ratio_sup;
        const double deeper = ratio_sup(mu, p, q, depth + 1, centers).ratio_sup;
        cert.ratio_sup_refined = ratio_sup(doubled, p, q, depth, centers * 2).ratio_sup;
        const BoundaryDensity f1 = boundary_density(mu, 1.0, 1024);
        const BoundaryDensity f2 = boundary_density(doubled, 1.0, 1024);
        cert.density_ls_norm = f1.linf;
        cert.density_ls_norm_refined = f2.linf;
        if (!detail::stable(cert.ratio_sup_value, deeper) ||
            !detail::stable(cert.ratio_sup_value, cert.ratio_sup_refined) ||
            !detail::stable(f1.linf, f2.linf))
            throw UndecidedError("p=q window test not stable under refinement");
        cert.is_carleson = true;
        return cert;
    }
    // p > q
    cert.regime = "p>q";
    cert.s = pv / (pv - qv);
    cert.boundary_mass = mu.boundary_mass();
    cert.g_ls_norm = ls_norm_G(mu, cert.s, alpha);
    cert.g_ls_norm_refined = ls_norm_G(doubled, cert.s, alpha);
    const BoundaryDensity f1 = boundary_density(mu, cert.s, 1024);
    const BoundaryDensity f2 = boundary_density(doubled, cert.s, 1024);
    cert.density_ls_norm = f1.ls_norm;
    cert.density_ls_norm_refined = f2.ls_norm;
    cert.note = "embedding bound ||F||_s + gamma ||M||_p^q ||G_r||_s keeps the "
                "Hardy-Littlewood maximal norm ||M||_p symbolic";
    if (!detail::stable(cert.g_ls_norm, cert.g_ls_norm_refined) ||
        !detail::stable(cert.density_ls_norm, cert.density_ls_norm_refined))
        throw UndecidedError("p>q balayage/density norms not stable under refinement");
    cert.is_carleson = true;
    return cert;
}

/// CSV rows "location_re,location_im,weight" for external plotting.
inline void measure_to_csv(const PullbackMeasure& mu, std::ostream& os) {
    os << "location_re,location_im,weight\n";
    for (const MeasureAtom& a : mu.atoms)
        os << a.location.real() << ',' << a.location.imag() << ',' << a.weight << '\n';
}

} // namespace wco
