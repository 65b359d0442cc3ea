#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/exponent.hpp"
#include "wco/funcspace.hpp"
#include "wco/kernels.hpp"
#include "wco/measures.hpp"
#include "wco/truncation.hpp"

namespace wco {

/// Discretization of |a| -> 1^-: rings of radius 1 - 2^-k swept at a fixed
/// number of angles.
struct RingSchedule {
    int k_min = 3;
    int k_max = 14;
    std::size_t angles = 256;

    std::vector<double> radii() const {
        if (k_min < 1 || k_max < k_min)
            throw ValidationError("invalid ring schedule");
        std::vector<double> out;
        for (int k = k_min; k <= k_max; ++k) out.push_back(1.0 - std::pow(2.0, -k));
        return out;
    }
};

struct Settings {
    std::size_t grid = kDefaultGrid;
    std::size_t kernel_grid = kKernelGrid;
    RingSchedule ring;
    int mphi_k_min = 3, mphi_k_max = 12;   // superlevel schedule for M_phi(u)
    int eps_k_min = 3, eps_k_max = 28;     // superlevel schedule for the extremal set
    double alpha = 0.5;
    int depth = 12;
    double boundary_threshold = kBoundaryThreshold;
    std::size_t trunc_degree = kDefaultTruncDegree;
    std::vector<std::size_t> trunc_schedule = kDefaultNSchedule;
    double compact_threshold = 0.05;
    bool sharper_h2_comp_norm = false;
};

/// Two-sided essential-norm estimate.  lower/upper hold the raw limit
/// estimates; the theorem constants are kept alongside so reports can show
/// both the raw values and the effective interval
/// [lower_const * lower, upper_const * upper].
struct EssNormBracket {
    double lower = 0.0;
    double upper = 0.0;
    double lower_const = 1.0;
    double upper_const = 1.0;
    std::string regime;
    bool compact = false;

    double effective_lower() const { return lower_const * lower; }
    double effective_upper() const { return upper_const * upper; }
};

struct RingTracePoint {
    int k = 0;
    double radius = 0.0;
    double max_integral = 0.0;  // max over the ring angles of the kernel integral
    std::size_t grid = 0;
};

struct EpsTracePoint {
    int k = 0;
    double eps = 0.0;
    double value = 0.0;
};

struct Diagnostics {
    std::vector<RingTracePoint> rings;
    std::vector<EpsTracePoint> mphi;
    std::vector<EpsTracePoint> extremal;
    std::vector<std::pair<std::size_t, double>> trunc_upper;
    std::vector<std::pair<std::size_t, double>> trunc_lower;
    std::vector<std::pair<std::size_t, double>> power_norms;
};

namespace detail {

/// Boundary samples shared by every kernel-integral sweep: the quadrature
/// weight |u*|^q (singular samples dropped) and phi* per grid point.
struct KernelSamples {
    std::vector<double> weight;
    std::vector<cplx> phi;
};

inline KernelSamples make_kernel_samples(const DiscFunction& u, const DiscFunction& phi,
                                         double q, std::size_t M) {
    KernelSamples s;
    s.weight.resize(M);
    s.phi.resize(M);
    const auto skip_u = singular_indices_for(u, M, 1.0);
    const auto skip_phi = singular_indices_for(phi, M, 1.0);
    for (std::size_t j = 0; j < M; ++j) {
        const bool bad =
            (!skip_u.empty() &&
             std::find(skip_u.begin(), skip_u.end(), static_cast<std::uint32_t>(j)) !=
                 skip_u.end()) ||
            (!skip_phi.empty() &&
             std::find(skip_phi.begin(), skip_phi.end(), static_cast<std::uint32_t>(j)) !=
                 skip_phi.end());
        if (bad) {
            s.weight[j] = 0.0;
            s.phi[j] = cplx(0.0, 0.0);
            continue;
        }
        const cplx zeta = unit_root(j, M);
        s.weight[j] = abs_pow(u.evaluate_abs_unchecked(zeta), q);
        s.phi[j] = phi.evaluate_unchecked(zeta);
    }
    return s;
}

/// (1/M) sum_j w_j ((1-|a|^2)/|1 - conj(a) phi_j|^2)^e, with a stride for
/// the coarse-grid self-check.
inline double kernel_quadrature(const KernelSamples& s, cplx a, double e,
                                std::size_t stride = 1) {
    const double na = 1.0 - std::norm(a);
    const cplx ac = std::conj(a);
    long double acc = 0.0L;
    const std::size_t M = s.phi.size();
    for (std::size_t j = 0; j < M; j += stride)
        acc += s.weight[j] * abs_pow(na / std::norm(1.0 - ac * s.phi[j]), e);
    return static_cast<double>(acc / static_cast<long double>(M / stride));
}

/// Max |phi'| on the circle from first differences of boundary samples;
/// sets how much the kernel spike narrows when pulled back through phi.
inline double boundary_derivative_bound(const DiscFunction& phi) {
    const std::size_t m = 8192;
    const auto skip = singular_indices_for(phi, m, 1.0);
    double best = 0.0;
    cplx prev = phi.evaluate_unchecked(unit_root(0, m));
    for (std::size_t j = 1; j <= m; ++j) {
        const cplx cur = phi.evaluate_unchecked(unit_root(j % m, m));
        if (skip.empty() ||
            (std::find(skip.begin(), skip.end(), static_cast<std::uint32_t>(j % m)) ==
                 skip.end() &&
             std::find(skip.begin(), skip.end(), static_cast<std::uint32_t>(j - 1)) ==
                 skip.end()))
            best = std::max(best, std::abs(cur - prev));
        prev = cur;
    }
    return best * static_cast<double>(m) / (2.0 * std::numbers::pi);
}

/// Per-ring grid: the Poisson-type spike at |a| = 1 - 2^-k has width
/// 2^-k / |phi'|, so the trapezoid grid keeps >= 16 points across it
/// (with slack for the finite-difference derivative estimate).
inline std::size_t ring_grid(std::size_t base, int k, double deriv_bound) {
    const double factor = 16.0 * std::max(1.0, 1.5 * deriv_bound);
    double need = factor * std::pow(2.0, k);
    std::size_t m = base;
    while (static_cast<double>(m) < need && m < (std::size_t(1) << 20)) m *= 2;
    return m;
}

/// Moduli of phi* with sorted prefix sums of |u*|^t, for superlevel sweeps.
struct SuperlevelTable {
    std::vector<double> moduli;   // sorted descending
    std::vector<double> prefix;   // prefix[i] = sum of weights of the i largest
    double total = 0.0;

    double mass_above(double threshold) const {
        // weights of samples with modulus > threshold
        std::size_t lo = 0, hi = moduli.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (moduli[mid] > threshold)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo == 0 ? 0.0 : prefix[lo - 1];
    }
};

inline SuperlevelTable make_superlevel_table(const DiscFunction& u,
                                             const DiscFunction& phi, double t,
                                             std::size_t M) {
    const auto skip_u = singular_indices_for(u, M, 1.0);
    const auto skip_phi = singular_indices_for(phi, M, 1.0);
    std::vector<std::pair<double, double>> rows;
    rows.reserve(M);
    for (std::size_t j = 0; j < M; ++j) {
        const bool bad =
            (!skip_u.empty() &&
             std::find(skip_u.begin(), skip_u.end(), static_cast<std::uint32_t>(j)) !=
                 skip_u.end()) ||
            (!skip_phi.empty() &&
             std::find(skip_phi.begin(), skip_phi.end(), static_cast<std::uint32_t>(j)) !=
                 skip_phi.end());
        if (bad) continue;
        const cplx zeta = unit_root(j, M);
        rows.emplace_back(phi.evaluate_abs_unchecked(zeta),
                          abs_pow(u.evaluate_abs_unchecked(zeta), t) /
                              static_cast<double>(M));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    SuperlevelTable tab;
    tab.moduli.reserve(rows.size());
    tab.prefix.reserve(rows.size());
    long double acc = 0.0L;
    for (const auto& [m, w] : rows) {
        tab.moduli.push_back(m);
        acc += w;
        tab.prefix.push_back(static_cast<double>(acc));
    }
    tab.total = static_cast<double>(acc);
    return tab;
}

} // namespace detail

/// int_T |u|^q ((1-|a|^2)/|1 - conj(a) phi|^2)^{q/p} dm by circle
/// quadrature.  The grid doubles until the value agrees with its
/// half-grid subsample to 1e-9 relative.
inline double kernel_integral(const DiscFunction& u, const SelfMap& phi,
                              const Exponent& p, const Exponent& q, cplx a,
                              std::size_t M = kDefaultGrid) {
    if (std::abs(a) >= 1.0) throw OutsideDomainError("need |a| < 1");
    const double e = q.value() / p.value();
    for (std::size_t m = M; m <= (std::size_t(1) << 20); m *= 2) {
        const auto samples = detail::make_kernel_samples(u, phi.map(), q.value(), m);
        const double full = detail::kernel_quadrature(samples, a, e);
        const double half = detail::kernel_quadrature(samples, a, e, 2);
        const double scale = std::max({std::abs(full), std::abs(half), 1e-300});
        if (std::abs(full - half) <= 1e-9 * scale) return full;
    }
    throw NonConvergentError("kernel integral did not stabilize under grid doubling");
}

struct BoundednessResult {
    bool bounded = false;
    bool undecided = false;
    double sup_estimate = 0.0;
    std::vector<RingTracePoint> rings;
};

namespace detail {

/// Ring sweep of the kernel integral: per ring the max over the angle grid.
inline std::vector<RingTracePoint> sweep_rings(const DiscFunction& u,
                                               const DiscFunction& phi, double p,
                                               double q, const RingSchedule& ring,
                                               std::size_t base_grid) {
    const double e = q / p;
    const double deriv = boundary_derivative_bound(phi);
    std::vector<RingTracePoint> out;
    std::map<std::size_t, KernelSamples> cache;
    for (int k = ring.k_min; k <= ring.k_max; ++k) {
        const double r = 1.0 - std::pow(2.0, -k);
        const std::size_t m = ring_grid(base_grid, k, deriv);
        auto it = cache.find(m);
        if (it == cache.end())
            it = cache.emplace(m, make_kernel_samples(u, phi, q, m)).first;
        double best = 0.0;
        for (std::size_t j = 0; j < ring.angles; ++j)
            best = std::max(best,
                            kernel_quadrature(it->second, r * unit_root(j, ring.angles), e));
        out.push_back({k, r, best, m});
    }
    return out;
}

/// Last three steps each grow by more than 10%.
inline bool diverging(const std::vector<RingTracePoint>& rings) {
    const std::size_t n = rings.size();
    if (n < 4) return false;
    for (std::size_t i = n - 3; i < n; ++i)
        if (!(rings[i].max_integral > 1.10 * rings[i - 1].max_integral)) return false;
    return true;
}

/// Any single >10% growth among the last three steps without all growing.
inline bool oscillating(const std::vector<RingTracePoint>& rings) {
    const std::size_t n = rings.size();
    if (n < 4) return false;
    bool any = false;
    for (std::size_t i = n - 3; i < n; ++i)
        if (rings[i].max_integral > 1.10 * rings[i - 1].max_integral) any = true;
    return any && !diverging(rings);
}

} // namespace detail

/// Boundedness of uC_phi : H^p -> H^q for 1 <= p <= q < inf: the kernel
/// integral must stay bounded as |a| -> 1.  The reported sup covers the
/// ring schedule plus a = 0.
inline BoundednessResult boundedness_pq(const DiscFunction& u, const SelfMap& phi,
                                        const Exponent& p, const Exponent& q,
                                        const Settings& cfg = {}) {
    if (p.value() > q.value())
        throw ValidationError("boundedness_pq requires p <= q");
    BoundednessResult res;
    res.rings = detail::sweep_rings(u, phi.map(), p.value(), q.value(), cfg.ring, cfg.grid);
    const auto center_samples =
        detail::make_kernel_samples(u, phi.map(), q.value(), cfg.grid);
    double sup = detail::kernel_quadrature(center_samples, cplx(0.0, 0.0),
                                           q.value() / p.value());
    for (const auto& r : res.rings) sup = std::max(sup, r.max_integral);
    res.sup_estimate = sup;
    if (detail::diverging(res.rings)) {
        res.bounded = false;
    } else if (detail::oscillating(res.rings)) {
        res.undecided = true;
    } else {
        res.bounded = true;
    }
    return res;
}

/// limsup estimate for the p <= q bracket: max of the kernel integral over
/// the outermost two rings, to the power 1/q.  The full ring trace ships in
/// the diagnostics so convergence can be judged by eye.
inline double essnorm_pq_upper(const std::vector<RingTracePoint>& rings, double q) {
    if (rings.size() < 2) throw ValidationError("need at least two rings");
    const double m = std::max(rings[rings.size() - 1].max_integral,
                              rings[rings.size() - 2].max_integral);
    return std::pow(m, 1.0 / q);
}

/// Test-vector route for the lower estimate: ||u (k_a^{1/p} o phi)||_q over
/// the same schedule.  On the circle |u (k_a^{1/p} o phi)|^q equals the
/// kernel integrand |u|^q ((1-|a|^2)/|1-conj(a) phi|^2)^{q/p} pointwise, so
/// the sweep shares the cached boundary samples; a unit test pins this
/// equality against the literal expression-tree evaluation.
inline double essnorm_pq_lower(const std::vector<RingTracePoint>& rings, double q) {
    return essnorm_pq_upper(rings, q);
}

// ---------------------------------------------------------------------------
// H^p -> H^inf (section on q = inf)
// ---------------------------------------------------------------------------

struct SupTestResult {
    bool bounded = false;
    bool undecided = false;
    double sup_estimate = 0.0;
};

namespace detail {

/// sup over a disk grid of |u(z)|^p / (1 - |phi(z)|^2), with radii packed
/// toward the boundary.
inline double disk_sup(const DiscFunction& u, const DiscFunction& phi, double p,
                       int max_j, std::size_t angles) {
    double best = 0.0;
    std::vector<double> radii;
    for (int i = 1; i <= 19; ++i) radii.push_back(0.05 * i);
    for (int j = 5; j <= max_j; ++j) radii.push_back(1.0 - std::pow(2.0, -j));
    for (double r : radii) {
        for (std::size_t j = 0; j < angles; ++j) {
            const cplx z = r * unit_root(j, angles);
            const double fm = phi.evaluate_abs_unchecked(z);
            const double denom = 1.0 - fm * fm;
            if (denom <= 0.0) continue;
            best = std::max(best, abs_pow(u.evaluate_abs_unchecked(z), p) / denom);
        }
    }
    return best;
}

} // namespace detail

/// Boundedness of uC_phi : H^p -> H^inf: sup |u|^p / (1 - |phi|^2) over the
/// disk, judged stable or growing across two near-boundary refinements.
inline SupTestResult boundedness_p_inf(const DiscFunction& u, const SelfMap& phi,
                                       const Exponent& p, const Settings& = {}) {
    const double pv = p.value();
    const double s1 = detail::disk_sup(u, phi.map(), pv, 12, 256);
    const double s2 = detail::disk_sup(u, phi.map(), pv, 15, 512);
    const double s3 = detail::disk_sup(u, phi.map(), pv, 18, 1024);
    SupTestResult res;
    res.sup_estimate = s3;
    if (s2 > 1.10 * s1 && s3 > 1.10 * s2) {
        res.bounded = false;
    } else if (std::abs(s3 - s2) <= 0.05 * std::max(s3, 1e-300)) {
        res.bounded = true;
    } else {
        res.undecided = true;
    }
    return res;
}

struct MphiResult {
    bool infinite = false;
    double value = 0.0;
    std::vector<EpsTracePoint> trace;
};

/// M_phi(u) = limsup_{|phi(z)| -> 1} |u(z)| / (1-|phi(z)|^2)^{1/p},
/// estimated on superlevel sets |phi| > 1 - eps with radii adapted per
/// level (points with |phi| near 1 only exist near the boundary).  A
/// sequence growing >10% on each of its last three steps reports infinite.
inline MphiResult m_phi(const DiscFunction& u, const SelfMap& phi, const Exponent& p,
                        const Settings& cfg = {}) {
    if (!phi.touches_boundary())
        throw ValidationError("m_phi requires ||phi||_inf = 1");
    const double pv = p.value();
    MphiResult res;
    for (int k = cfg.mphi_k_min; k <= cfg.mphi_k_max; ++k) {
        const double eps = std::pow(2.0, -k);
        double sup = -1.0;
        for (int attempt = 0; attempt < 2; ++attempt) {
            const std::size_t angles = attempt == 0 ? 512 : 2048;
            std::vector<double> radii;
            for (int s = -10; s <= 4; ++s) {
                const double r = 1.0 - eps * std::pow(2.0, 0.5 * s + attempt * 0.25);
                if (r > 0.0 && r < 1.0) radii.push_back(r);
            }
            for (double r : radii) {
                for (std::size_t j = 0; j < angles; ++j) {
                    const cplx z = r * unit_root(j, angles);
                    const double fm = phi.map().evaluate_abs_unchecked(z);
                    if (fm <= 1.0 - eps) continue;
                    const double denom = std::pow(1.0 - fm * fm, 1.0 / pv);
                    sup = std::max(sup, u.evaluate_abs_unchecked(z) / denom);
                }
            }
            if (sup >= 0.0) break;
        }
        if (sup < 0.0)
            throw EmptyLevelError("no grid point reaches |phi| > 1 - 2^-" +
                                  std::to_string(k));
        res.trace.push_back({k, eps, sup});
    }
    const std::size_t n = res.trace.size();
    if (n >= 4) {
        bool all_grow = true;
        for (std::size_t i = n - 3; i < n; ++i)
            if (!(res.trace[i].value > 1.10 * res.trace[i - 1].value)) all_grow = false;
        if (all_grow) {
            res.infinite = true;
            res.value = std::numeric_limits<double>::infinity();
            return res;
        }
    }
    res.value = res.trace.back().value;
    return res;
}

/// Bracket for H^p -> H^inf: [M_phi(u), M_phi(u)] with constants (1/2, 2),
/// the lower constant improving to 1 for p > 1.  ||phi||_inf < 1 means
/// compact and the bracket collapses to [0, 0].
inline EssNormBracket essnorm_p_inf(const DiscFunction& u, const SelfMap& phi,
                                    const Exponent& p, const Settings& cfg = {},
                                    Diagnostics* diag = nullptr) {
    EssNormBracket b;
    b.regime = "hp_to_hinf";
    b.lower_const = p.value() > 1.0 ? 1.0 : 0.5;
    b.upper_const = 2.0;
    if (!phi.touches_boundary()) {
        b.compact = true;
        return b;
    }
    const MphiResult m = m_phi(u, phi, p, cfg);
    if (diag) diag->mphi = m.trace;
    if (m.infinite)
        throw NotBoundedError("M_phi(u) diverges; operator cannot be bounded");
    b.lower = m.value;
    b.upper = m.value;
    b.compact = m.value < cfg.compact_threshold;
    return b;
}

// ---------------------------------------------------------------------------
// extremal set machinery (H^inf -> H^q and p > q)
// ---------------------------------------------------------------------------

struct ExtremalResult {
    double value = 0.0;
    std::vector<EpsTracePoint> trace;
};

/// int over {|phi*| > 1 - eps} of |u|^t dm along a decreasing eps schedule;
/// the estimate of int_{E_phi} |u|^t dm is the final value once the last
/// two levels agree to 1e-4 relative.
inline ExtremalResult extremal_integral(const DiscFunction& u, const SelfMap& phi,
                                        double t, int k_min, int k_max,
                                        std::size_t M = kDefaultGrid) {
    if (t < 1.0) throw ValidationError("extremal exponent must be >= 1");
    const auto tab = detail::make_superlevel_table(u, phi.map(), t, M);
    ExtremalResult res;
    for (int k = k_min; k <= k_max; ++k) {
        const double eps = std::pow(2.0, -k);
        res.trace.push_back({k, eps, tab.mass_above(1.0 - eps)});
    }
    const std::size_t n = res.trace.size();
    if (n < 2) throw ValidationError("eps schedule too short");
    const double last = res.trace[n - 1].value;
    const double prev = res.trace[n - 2].value;
    if (std::abs(last - prev) > std::max(1e-4 * std::max(last, prev), 1e-12))
        throw NonConvergentError("extremal integral eps-sequence did not stabilize");
    res.value = last;
    return res;
}

/// Bracket for H^inf -> H^q: J = int_{E_phi} |u|^q dm, bracket
/// [J^{1/q}, J^{1/q}] with constants (1/2, 2).
inline EssNormBracket essnorm_inf_q(const DiscFunction& u, const SelfMap& phi,
                                    const Exponent& q, const Settings& cfg = {},
                                    Diagnostics* diag = nullptr) {
    const double qv = q.value();
    hardy_norm(u, q, cfg.grid);  // u must lie in H^q; throws if divergent
    const ExtremalResult ext =
        extremal_integral(u, phi, qv, cfg.eps_k_min, cfg.eps_k_max, cfg.grid);
    if (diag) diag->extremal = ext.trace;
    EssNormBracket b;
    b.regime = "hinf_to_hq";
    b.lower_const = 0.5;
    b.upper_const = 2.0;
    b.lower = std::pow(ext.value, 1.0 / qv);
    b.upper = b.lower;
    b.compact = b.upper < cfg.compact_threshold;
    return b;
}

/// ||u phi^n||_q for each n; its limit re-estimates the extremal integral
/// to the power 1/q through an independent route.
inline std::vector<std::pair<std::size_t, double>> power_norm_sequence(
    const DiscFunction& u, const SelfMap& phi, const Exponent& q,
    const std::vector<std::size_t>& n_list, std::size_t M = kDefaultGrid) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t n : n_list) {
        const DiscFunction fn =
            u * DiscFunction::compose(DiscFunction::monomial(static_cast<long>(n)),
                                      phi.map());
        out.emplace_back(n, hardy_norm(fn, q, M));
    }
    return out;
}

/// Bracket for infty > p > q >= 1.  Requires the pullback measure to pass
/// the (p,q)-Carleson test.  The composition norm ||C_phi||_{p/q} is not
/// computed exactly; the classical bound ((1+|phi(0)|)/(1-|phi(0)|))^{q/p}
/// stands in (optionally the H^2 truncation norm when p/q = 2), and the
/// report labels it a surrogate.
inline EssNormBracket essnorm_p_gt_q(const DiscFunction& u, const SelfMap& phi,
                                     const Exponent& p, const Exponent& q,
                                     const Settings& cfg = {},
                                     Diagnostics* diag = nullptr,
                                     CarlesonCertificate* cert_out = nullptr,
                                     std::vector<std::string>* notes = nullptr) {
    const double pv = p.value();
    const double qv = q.value();
    if (!(pv > qv)) throw ValidationError("essnorm_p_gt_q requires p > q");
    const PullbackMeasure mu = pullback(u, phi, q, cfg.grid, cfg.boundary_threshold);
    const CarlesonCertificate cert =
        classify_carleson(mu, p, q, cfg.depth, cfg.alpha);
    if (cert_out) *cert_out = cert;
    if (!cert.is_carleson)
        throw NotBoundedError("pullback measure fails the (p,q)-Carleson test");

    const ExtremalResult lower_ext =
        extremal_integral(u, phi, qv, cfg.eps_k_min, cfg.eps_k_max, cfg.grid);
    if (diag) diag->extremal = lower_ext.trace;
    const double t2 = pv * qv / (pv - qv);
    const ExtremalResult upper_ext =
        extremal_integral(u, phi, t2, cfg.eps_k_min, cfg.eps_k_max, cfg.grid);

    double comp_norm = std::pow((1.0 + std::abs(phi.map().evaluate_unchecked(cplx(0, 0)))) /
                                    (1.0 - std::abs(phi.map().evaluate_unchecked(cplx(0, 0)))),
                                qv / pv);
    std::string comp_note = "composition norm surrogate ((1+|phi(0)|)/(1-|phi(0)|))^{q/p}";
    if (cfg.sharper_h2_comp_norm && pv / qv == 2.0) {
        const TruncationMatrix T = build_matrix(DiscFunction::constant(cplx(1.0, 0.0)),
                                                phi, cfg.trunc_degree, cfg.grid);
        comp_norm = operator_norm_h2(T);
        comp_note = "composition norm from the H^2 truncation matrix (lower estimate)";
    }
    if (notes) notes->push_back(comp_note);

    EssNormBracket b;
    b.regime = "p_gt_q_finite";
    b.lower_const = 1.0;
    b.upper_const = 2.0;
    b.lower = std::pow(lower_ext.value, 1.0 / qv);
    b.upper = std::pow(comp_norm, 1.0 / qv) *
              std::pow(upper_ext.value, (pv - qv) / (pv * qv));
    b.compact = b.effective_upper() < cfg.compact_threshold;
    return b;
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

struct AnalysisReport {
    std::string regime;
    std::string status = "ok";  // ok | unbounded | undecided
    std::string status_detail;
    bool bounded = false;
    double boundedness_sup = 0.0;
    std::optional<EssNormBracket> bracket;
    std::optional<CarlesonCertificate> carleson;
    std::optional<H2EssNormSequence> trunc_upper;
    std::optional<H2EssNormSequence> trunc_lower;
    double trunc_tail = 0.0;
    Diagnostics diag;
    std::vector<std::string> notes;
};

namespace detail {

inline void reject_degenerate_u(const DiscFunction& u) {
    // the standing hypothesis: u is a non-zero analytic function
    for (int j = 0; j < 64; ++j) {
        const cplx z = 0.7 * unit_root(static_cast<std::size_t>(j), 64) *
                       (j % 2 ? 1.0 : 0.45);
        if (std::abs(u.evaluate_unchecked(z)) > 1e-14) return;
    }
    throw ValidationError("weight u vanishes identically");
}

} // namespace detail

/// Routes (p, q) to the matching boundedness test and bracket.  For
/// p = q = 2 the truncation-matrix cross-check rides along.  Numerical
/// indecision lands in status = "undecided" rather than an exception so the
/// CLI can map it to its own exit code.
inline AnalysisReport analyze(const DiscFunction& u, const SelfMap& phi,
                              const Exponent& p, const Exponent& q,
                              const Settings& cfg = {}) {
    detail::reject_degenerate_u(u);
    AnalysisReport rep;
    try {
        if (p.is_infinite() && q.is_infinite())
            throw ValidationError("the pair p = q = inf is outside the covered regimes");
        if (!p.is_infinite() && q.is_infinite()) {
            rep.regime = "hp_to_hinf";
            const SupTestResult bt = boundedness_p_inf(u, phi, p, cfg);
            rep.bounded = bt.bounded;
            rep.boundedness_sup = bt.sup_estimate;
            if (bt.undecided) {
                rep.status = "undecided";
                rep.status_detail = "boundedness sup not stable under refinement";
                return rep;
            }
            if (!bt.bounded) {
                rep.status = "unbounded";
                return rep;
            }
            rep.bracket = essnorm_p_inf(u, phi, p, cfg, &rep.diag);
            return rep;
        }
        if (p.is_infinite()) {
            rep.regime = "hinf_to_hq";
            rep.boundedness_sup = hardy_norm(u, q, cfg.grid);  // bounded iff u in H^q
            rep.bounded = true;
            rep.bracket = essnorm_inf_q(u, phi, q, cfg, &rep.diag);
            rep.diag.power_norms =
                power_norm_sequence(u, phi, q, {1, 2, 4, 8, 16, 32, 64, 128, 256},
                                    cfg.grid);
            return rep;
        }
        const double pv = p.value();
        const double qv = q.value();
        if (pv <= qv) {
            rep.regime = (pv == 1.0) ? "p1_le_q" : "p_le_q_finite";
            const BoundednessResult bt = boundedness_pq(u, phi, p, q, cfg);
            rep.diag.rings = bt.rings;
            rep.bounded = bt.bounded;
            rep.boundedness_sup = bt.sup_estimate;
            if (bt.undecided) {
                rep.status = "undecided";
                rep.status_detail = "ring maxima oscillate beyond the divergence criterion";
                return rep;
            }
            if (!bt.bounded) {
                rep.status = "unbounded";
                return rep;
            }
            EssNormBracket b;
            b.regime = rep.regime;
            b.lower_const = (pv > 1.0 && qv > 1.0) ? 1.0 : 0.5;
            b.upper_const = 2.0;
            b.upper = essnorm_pq_upper(bt.rings, qv);
            b.lower = essnorm_pq_lower(bt.rings, qv);
            b.compact = b.upper < cfg.compact_threshold;
            rep.bracket = b;
            if (pv == 2.0 && qv == 2.0) {
                const TruncationMatrix T =
                    build_matrix(u, phi, cfg.trunc_degree, cfg.grid);
                rep.trunc_tail = T.tail_bound;
                rep.trunc_upper = essnorm_h2_upper(T, cfg.trunc_schedule);
                rep.trunc_lower = essnorm_h2_lower(T, cfg.trunc_schedule);
                rep.diag.trunc_upper = rep.trunc_upper->per_N;
                rep.diag.trunc_lower = rep.trunc_lower->per_N;
            }
            return rep;
        }
        // infty > p > q >= 1
        rep.regime = "p_gt_q_finite";
        CarlesonCertificate cert;
        try {
            rep.bracket = essnorm_p_gt_q(u, phi, p, q, cfg, &rep.diag, &cert, &rep.notes);
            rep.carleson = cert;
            rep.bounded = true;
            rep.boundedness_sup = cert.g_ls_norm;
            rep.diag.power_norms =
                power_norm_sequence(u, phi, q, {1, 2, 4, 8, 16, 32, 64, 128, 256},
                                    cfg.grid);
        } catch (const NotBoundedError&) {
            rep.carleson = cert;
            rep.bounded = false;
            rep.status = "unbounded";
        }
        return rep;
    } catch (const UndecidedError& e) {
        rep.status = "undecided";
        rep.status_detail = e.what();
        return rep;
    } catch (const NonConvergentError& e) {
        rep.status = "undecided";
        rep.status_detail = e.what();
        return rep;
    }
}

} // namespace wco
