#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "wco/detail/fft.hpp"
#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/funcspace.hpp"

namespace wco {

inline constexpr std::size_t kDefaultTruncDegree = 256;
inline const std::vector<std::size_t> kDefaultNSchedule = {8, 16, 32, 64, 128};

/// Matrix of uC_phi on the monomials z^0..z^K: column n holds the Taylor
/// coefficients 0..K of u phi^n.  A ground-truth oracle for the Hilbert
/// case; the discarded coefficient mass is reported, never hidden.
struct TruncationMatrix {
    std::size_t degree = 0;              // K
    std::vector<cplx> entries;           // row-major (K+1) x (K+1)
    double tail_bound = 0.0;
    double radius = 1.0;                 // sampling radius used
    // ||u phi^n||_2 from the same boundary samples; column n of the full
    // (untruncated) operator, so a certified lower bound on ||uC_phi e_n||
    std::vector<double> column_norms;

    cplx at(std::size_t row, std::size_t col) const {
        return entries[row * (degree + 1) + col];
    }
    cplx& at(std::size_t row, std::size_t col) {
        return entries[row * (degree + 1) + col];
    }
    std::size_t dim() const { return degree + 1; }
};

/// One boundary grid of u and phi, running products phi^n, one FFT per
/// column.  Defaults: radius 1 when both symbols are polynomials, else
/// 1 - 2^-20.
inline TruncationMatrix build_matrix(const DiscFunction& u, const SelfMap& phi,
                                     std::size_t K = kDefaultTruncDegree,
                                     std::size_t M = kDefaultGrid, double rho = 0.0) {
    if (rho == 0.0)
        rho = (u.is_polynomial() && phi.map().is_polynomial())
                  ? 1.0
                  : 1.0 - std::pow(2.0, -20);
    if (K >= M / 2) throw ValidationError("need K < M/2");
    if (!detail::is_power_of_two(M)) throw ValidationError("grid must be a power of two");

    std::vector<cplx> u_samples(M), phi_samples(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx z = rho * unit_root(j, M);
        u_samples[j] = u.evaluate_unchecked(z);
        phi_samples[j] = phi.map().evaluate_unchecked(z);
    }

    TruncationMatrix T;
    T.degree = K;
    T.entries.assign((K + 1) * (K + 1), cplx(0.0, 0.0));

    std::vector<double> inv_rho_pow(K + 1);
    double scale = 1.0;
    for (std::size_t n = 0; n <= K; ++n) {
        inv_rho_pow[n] = 1.0 / scale;
        scale *= rho;
    }

    std::vector<cplx> work(M);
    std::vector<cplx> running = u_samples;
    double tail = 0.0;
    T.radius = rho;
    T.column_norms.resize(K + 1);
    for (std::size_t col = 0; col <= K; ++col) {
        long double mass = 0.0L;
        for (std::size_t j = 0; j < M; ++j) mass += std::norm(running[j]);
        T.column_norms[col] =
            static_cast<double>(std::sqrt(mass / static_cast<long double>(M)));
        work = running;
        detail::dft_forward(work);
        for (std::size_t row = 0; row <= K; ++row)
            T.at(row, col) = work[row] / static_cast<double>(M) * inv_rho_pow[row];
        // decay of the last 16 retained rows plus the aliased band
        double col_tail = 0.0;
        for (std::size_t row = (K >= 15 ? K - 15 : 0); row <= K; ++row)
            col_tail = std::max(col_tail, std::abs(T.at(row, col)));
        for (std::size_t n = M / 2; n < M; ++n)
            col_tail = std::max(col_tail, std::abs(work[n]) / static_cast<double>(M));
        tail = std::max(tail, col_tail);
        if (col < K)
            for (std::size_t j = 0; j < M; ++j) running[j] *= phi_samples[j];
    }
    T.tail_bound = tail;
    return T;
}

namespace detail {

inline void mat_apply(const TruncationMatrix& T, const std::vector<cplx>& x,
                      std::vector<cplx>& y) {
    const std::size_t n = T.dim();
    y.assign(n, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        cplx acc(0.0, 0.0);
        const cplx* row = &T.entries[r * n];
        for (std::size_t c = 0; c < n; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

inline void mat_apply_adjoint(const TruncationMatrix& T, const std::vector<cplx>& x,
                              std::vector<cplx>& y) {
    const std::size_t n = T.dim();
    y.assign(n, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        const cplx xr = x[r];
        const cplx* row = &T.entries[r * n];
        for (std::size_t c = 0; c < n; ++c) y[c] += std::conj(row[c]) * xr;
    }
}

inline double vec_norm(const std::vector<cplx>& v) {
    long double acc = 0.0L;
    for (const cplx& x : v) acc += std::norm(x);
    return static_cast<double>(std::sqrt(acc));
}

} // namespace detail

/// Largest singular value by power iteration on T*T.  A certified lower
/// bound to the H^2 operator norm, converging upward in K.
inline double operator_norm_h2(const TruncationMatrix& T, double tol = 1e-10,
                               std::size_t max_iter = 50000) {
    const std::size_t n = T.dim();
    std::vector<cplx> v(n), w(n), t(n);
    // deterministic start with uneven phases so no fixed direction is missed
    for (std::size_t j = 0; j < n; ++j)
        v[j] = cplx(1.0 + 0.25 * std::cos(1.7 * static_cast<double>(j + 1)),
                    0.25 * std::sin(0.9 * static_cast<double>(j + 1)));
    double nv = detail::vec_norm(v);
    for (auto& x : v) x /= nv;
    double sigma_prev = -1.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        detail::mat_apply(T, v, w);
        const double sigma = detail::vec_norm(w);
        if (sigma == 0.0) return 0.0;
        if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= tol * std::max(1.0, sigma))
            return sigma;
        sigma_prev = sigma;
        detail::mat_apply_adjoint(T, w, t);
        const double nt = detail::vec_norm(t);
        if (nt == 0.0) return sigma;
        for (std::size_t j = 0; j < n; ++j) v[j] = t[j] / nt;
    }
    throw NoConvergenceError("power iteration hit the iteration cap");
}

/// Which remainder the truncation sandwich uses.
///  - tail_projector: R_N = I - P_N with P_N the orthogonal truncation at
///    degree N.  Natural in H^2 (P_N is a norm-one compact projection) and
///    the default.
///  - fejer: coefficient multipliers n/N (n < N), 1 (n >= N).
enum class RemainderKind { tail_projector, fejer };

inline double remainder_multiplier(RemainderKind kind, std::size_t n, std::size_t N) {
    if (kind == RemainderKind::tail_projector) return n <= N ? 0.0 : 1.0;
    return n < N ? static_cast<double>(n) / static_cast<double>(N) : 1.0;
}

struct H2EssNormSequence {
    std::vector<std::pair<std::size_t, double>> per_N;  // (N, value)
    double estimate = 0.0;
};

/// ||uC_phi R_N|| on the truncated space for each N: T with column n scaled
/// by the remainder multiplier.  The running minimum estimates the liminf
/// that dominates the essential norm.
///
/// Truncation at K only underestimates this norm (it restricts to a
/// subspace and drops coefficient rows beyond K), so each value is floored
/// by the best scaled true column norm max_n d_n ||u phi^n||_2 — without
/// it an inner map like z^2 would report 0 once N exceeds K/2 simply
/// because z^{2n} fell off the truncated basis.
inline H2EssNormSequence essnorm_h2_upper(const TruncationMatrix& T,
                                          const std::vector<std::size_t>& schedule =
                                              kDefaultNSchedule,
                                          RemainderKind kind = RemainderKind::tail_projector) {
    H2EssNormSequence out;
    const std::size_t n = T.dim();
    double best = 0.0;
    bool first = true;
    for (std::size_t N : schedule) {
        TruncationMatrix S = T;
        for (std::size_t col = 0; col < n; ++col) {
            const double d = remainder_multiplier(kind, col, N);
            for (std::size_t row = 0; row < n; ++row) S.at(row, col) *= d;
        }
        double val = operator_norm_h2(S);
        for (std::size_t col = 0; col < n; ++col)
            val = std::max(val, remainder_multiplier(kind, col, N) * T.column_norms[col]);
        out.per_N.emplace_back(N, val);
        best = first ? val : std::min(best, val);
        first = false;
    }
    out.estimate = best;
    return out;
}

/// ||R_N uC_phi|| / gamma on the truncated space for each N: T with row n
/// scaled, then divided by the paper bound gamma = 2.  The estimate is the
/// maximum over the last two schedule entries — the tail of the sequence —
/// mirroring how the ring estimators read off a limsup.
inline H2EssNormSequence essnorm_h2_lower(const TruncationMatrix& T,
                                          const std::vector<std::size_t>& schedule =
                                              kDefaultNSchedule,
                                          RemainderKind kind = RemainderKind::tail_projector) {
    constexpr double gamma = 2.0;
    H2EssNormSequence out;
    const std::size_t n = T.dim();
    for (std::size_t N : schedule) {
        TruncationMatrix S = T;
        for (std::size_t row = 0; row < n; ++row) {
            const double d = remainder_multiplier(kind, row, N);
            for (std::size_t col = 0; col < n; ++col) S.at(row, col) *= d;
        }
        out.per_N.emplace_back(N, operator_norm_h2(S) / gamma);
    }
    const std::size_t k = out.per_N.size();
    for (std::size_t i = (k >= 2 ? k - 2 : 0); i < k; ++i)
        out.estimate = std::max(out.estimate, out.per_N[i].second);
    return out;
}

/// alpha_p(a): the p-th Taylor coefficient of k_a(phi(z)) / (1-|a|^2),
/// evaluated through the closed form
///   sum_{j=0}^{p} <psi^j, z^p> (j+1) conj(a)^j / (1 - conj(a) a0)^{j+2}
/// with a0 = phi(0) and psi = phi - a0; the inner products come from one
/// running-power DFT pass over boundary samples of psi.
inline cplx kernel_coefficient_alpha(const SelfMap& phi, cplx a, std::size_t p_index,
                                     std::size_t M = 4096) {
    if (std::abs(a) >= 1.0) throw OutsideDomainError("need |a| < 1");
    const cplx a0 = phi.map().evaluate_unchecked(cplx(0.0, 0.0));
    std::vector<cplx> psi(M);
    for (std::size_t j = 0; j < M; ++j)
        psi[j] = phi.map().evaluate_unchecked(unit_root(j, M)) - a0;

    // <psi^j, z^p> for j = 0..p by running powers
    std::vector<cplx> inner(p_index + 1, cplx(0.0, 0.0));
    std::vector<cplx> running(M, cplx(1.0, 0.0));
    for (std::size_t j = 0; j <= p_index; ++j) {
        cplx acc(0.0, 0.0);
        for (std::size_t l = 0; l < M; ++l) {
            // conj(zeta^p) walks backwards around the circle
            acc += running[l] * unit_root((M - ((l * p_index) % M)) % M, M);
        }
        inner[j] = acc / static_cast<double>(M);
        if (j < p_index)
            for (std::size_t l = 0; l < M; ++l) running[l] *= psi[l];
    }

    const cplx ab = std::conj(a);
    const cplx base = 1.0 - ab * a0;
    cplx alpha(0.0, 0.0);
    cplx ab_pow(1.0, 0.0);
    cplx base_pow = base * base;
    for (std::size_t j = 0; j <= p_index; ++j) {
        alpha += inner[j] * (static_cast<double>(j + 1)) * ab_pow / base_pow;
        ab_pow *= ab;
        base_pow *= base;
    }
    return alpha;
}

/// CSV of the matrix entries for inspection: row,col,re,im.
inline void matrix_to_csv(const TruncationMatrix& T, std::ostream& os) {
    os << "row,col,re,im\n";
    for (std::size_t r = 0; r < T.dim(); ++r)
        for (std::size_t c = 0; c < T.dim(); ++c)
            os << r << ',' << c << ',' << T.at(r, c).real() << ',' << T.at(r, c).imag()
               << '\n';
}

} // namespace wco
