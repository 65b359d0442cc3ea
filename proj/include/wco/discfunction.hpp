#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "wco/errors.hpp"

namespace wco {

using cplx = std::complex<double>;

namespace detail {

/// Shortest round-trip formatting for canonical expression text.
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // try shorter representations that still round-trip
    for (int prec = 1; prec < 17; ++prec) {
        char cand[64];
        std::snprintf(cand, sizeof(cand), "%.*g", prec, v);
        if (std::strtod(cand, nullptr) == v) return std::string(cand);
    }
    return std::string(buf);
}

inline std::string fmt_cplx(cplx c) {
    if (c.imag() == 0.0) return fmt_double(c.real());
    return "complex(" + fmt_double(c.real()) + ", " + fmt_double(c.imag()) + ")";
}

inline cplx horner(const std::vector<cplx>& coeffs, cplx z) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

inline cplx powi(cplx z, long n) {
    cplx result(1.0, 0.0);
    while (n > 0) {
        if (n & 1) result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

/// Durand-Kerner root finder for modest-degree polynomials.  Used only to
/// validate rational denominators at construction time.
inline std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs) {
    while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    const std::size_t deg = coeffs.size() - 1;
    const cplx lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;
    std::vector<cplx> roots(deg);
    // standard non-real starting configuration
    const cplx seed(0.4, 0.9);
    cplx w(1.0, 0.0);
    for (std::size_t i = 0; i < deg; ++i) {
        w *= seed;
        roots[i] = w;
    }
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            cplx num = horner(coeffs, roots[i]);
            cplx den(1.0, 0.0);
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) den *= roots[i] - roots[j];
            if (std::abs(den) == 0.0) continue;
            cplx delta = num / den;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-13) break;
    }
    return roots;
}

} // namespace detail

enum class FuncKind {
    polynomial,
    rational,
    blaschke_product,
    kernel,
    cauchy_kernel,
    monomial_power,
    scalar_multiple,
    sum,
    product,
    composition,
    kernel_power,
};

/// An analytic function on the open unit disk, represented as a closed
/// expression tree over a fixed set of primitives.  Values are immutable;
/// composition and arithmetic return new trees sharing subtrees.
///
/// Every primitive here extends continuously to the closed disk except at
/// its listed singular boundary points (rational denominators may vanish
/// on the circle), so boundary traces are taken at radius 1.
class DiscFunction {
    struct Node {
        FuncKind kind{};
        std::vector<cplx> params;    // coefficients / zeros / {a} / {w} / {c}
        std::vector<cplx> params2;   // rational denominator
        double exponent = 0.0;       // kernel_power
        long power = 0;              // monomial_power
        std::vector<std::shared_ptr<const Node>> children;
        std::vector<cplx> singular;  // unit-modulus singular boundary points
    };
    using NodePtr = std::shared_ptr<const Node>;

public:
    // ---- factories -------------------------------------------------------

    static DiscFunction polynomial(std::vector<cplx> coeffs) {
        if (coeffs.empty()) coeffs.push_back(cplx(0.0, 0.0));
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::polynomial;
        n->params = std::move(coeffs);
        return DiscFunction(std::move(n));
    }

    static DiscFunction constant(cplx c) { return polynomial({c}); }

    static DiscFunction identity() { return monomial(1); }

    static DiscFunction monomial(long n) {
        if (n < 0) throw ValidationError("monomial power must be >= 0");
        auto node = std::make_shared<Node>();
        node->kind = FuncKind::monomial_power;
        node->power = n;
        return DiscFunction(std::move(node));
    }

    /// num/den.  The denominator must not vanish inside the open disk;
    /// denominator roots on the unit circle become the singular boundary
    /// point list.
    static DiscFunction rational(std::vector<cplx> num, std::vector<cplx> den) {
        if (den.empty()) throw ValidationError("rational: empty denominator");
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::rational;
        n->params = std::move(num);
        n->params2 = std::move(den);
        for (const cplx& r : detail::polynomial_roots(n->params2)) {
            const double m = std::abs(r);
            if (m < 1.0 - 1e-9)
                throw ValidationError("rational: denominator root inside the disk at |z|=" +
                                      std::to_string(m));
            if (m <= 1.0 + 1e-9) n->singular.push_back(r / m);
        }
        return DiscFunction(std::move(n));
    }

    /// Product of Blaschke factors with the given zeros (|a_k| < 1).
    /// The factor for a zero a is (|a|/a)(a-z)/(1 - conj(a) z); a = 0 gives z.
    static DiscFunction blaschke(std::vector<cplx> zeros) {
        for (const cplx& a : zeros)
            if (std::abs(a) >= 1.0)
                throw OutsideDomainError("blaschke zero must satisfy |a| < 1");
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::blaschke_product;
        n->params = std::move(zeros);
        return DiscFunction(std::move(n));
    }

    /// k_a(z) = (1 - |a|^2) / (1 - conj(a) z)^2.
    static DiscFunction kernel(cplx a) {
        if (std::abs(a) >= 1.0)
            throw OutsideDomainError("kernel point must satisfy |a| < 1");
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::kernel;
        n->params = {a};
        return DiscFunction(std::move(n));
    }

    /// k_a^t via the principal branch: (1-|a|^2)^t (1 - conj(a) z)^{-2t}.
    /// Well defined since Re(1 - conj(a) z) > 0 on the closed disk.
    static DiscFunction kernel_power(cplx a, double t) {
        if (std::abs(a) >= 1.0)
            throw OutsideDomainError("kernel point must satisfy |a| < 1");
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::kernel_power;
        n->params = {a};
        n->exponent = t;
        return DiscFunction(std::move(n));
    }

    /// K_w(z) = 1 / (1 - conj(w) z).
    static DiscFunction cauchy_kernel(cplx w) {
        if (std::abs(w) >= 1.0)
            throw OutsideDomainError("cauchy kernel point must satisfy |w| < 1");
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::cauchy_kernel;
        n->params = {w};
        return DiscFunction(std::move(n));
    }

    static DiscFunction scalar_multiple(cplx c, const DiscFunction& f) {
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::scalar_multiple;
        n->params = {c};
        n->children = {f.root_};
        n->singular = f.root_->singular;
        return DiscFunction(std::move(n));
    }

    static DiscFunction sum(const DiscFunction& f, const DiscFunction& g) {
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::sum;
        n->children = {f.root_, g.root_};
        n->singular = merge_singular(f.root_->singular, g.root_->singular);
        return DiscFunction(std::move(n));
    }

    static DiscFunction product(const DiscFunction& f, const DiscFunction& g) {
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::product;
        n->children = {f.root_, g.root_};
        n->singular = merge_singular(f.root_->singular, g.root_->singular);
        return DiscFunction(std::move(n));
    }

    /// f(g(z)).  The inner function's singular points carry over; the outer
    /// function must be regular on the closed disk (all primitives here are,
    /// unless they carry singular points).
    static DiscFunction compose(const DiscFunction& outer, const DiscFunction& inner) {
        if (!outer.root_->singular.empty())
            throw ValidationError(
                "compose: outer function has singular boundary points");
        auto n = std::make_shared<Node>();
        n->kind = FuncKind::composition;
        n->children = {outer.root_, inner.root_};
        n->singular = inner.root_->singular;
        return DiscFunction(std::move(n));
    }

    // ---- evaluation ------------------------------------------------------

    /// f(z) for |z| <= 1; throws OutsideDomainError beyond the closed disk
    /// and SingularPointError at a listed singular boundary point.
    cplx evaluate(cplx z) const {
        check_point(z);
        return eval(*root_, z);
    }

    /// |f(z)| with modulus-wise shortcuts (no complex powers for kernels,
    /// no square roots for k_a).  Same domain rules as evaluate().
    double evaluate_abs(cplx z) const {
        check_point(z);
        return eval_abs(*root_, z);
    }

    /// Unchecked variants for grid loops over known-good points.
    cplx evaluate_unchecked(cplx z) const { return eval(*root_, z); }
    double evaluate_abs_unchecked(cplx z) const { return eval_abs(*root_, z); }

    const std::vector<cplx>& singular_points() const { return root_->singular; }

    FuncKind kind() const { return root_->kind; }

    /// Coefficients when this node is a plain polynomial.
    const std::vector<cplx>& poly_coefficients() const {
        if (root_->kind != FuncKind::polynomial)
            throw ValidationError("not a polynomial node");
        return root_->params;
    }

    bool is_polynomial() const {
        switch (root_->kind) {
            case FuncKind::polynomial:
            case FuncKind::monomial_power:
                return true;
            case FuncKind::scalar_multiple:
            case FuncKind::sum:
            case FuncKind::product:
            case FuncKind::composition: {
                for (const auto& c : root_->children)
                    if (!DiscFunction(c).is_polynomial()) return false;
                return true;
            }
            default:
                return false;
        }
    }

    /// Canonical expression text in the scenario grammar; parsing it back
    /// reproduces the same tree.
    std::string to_string() const { return print(*root_); }

    bool same_as(const DiscFunction& o) const { return to_string() == o.to_string(); }

private:
    explicit DiscFunction(NodePtr n) : root_(std::move(n)) {}

    static std::vector<cplx> merge_singular(const std::vector<cplx>& a,
                                            const std::vector<cplx>& b) {
        std::vector<cplx> out = a;
        for (const cplx& s : b) {
            bool dup = false;
            for (const cplx& t : out)
                if (std::abs(s - t) < 1e-12) { dup = true; break; }
            if (!dup) out.push_back(s);
        }
        return out;
    }

    void check_point(cplx z) const {
        const double m = std::abs(z);
        if (m > 1.0 + 1e-12)
            throw OutsideDomainError("evaluation point outside the closed disk, |z|=" +
                                     std::to_string(m));
        if (m > 1.0 - 1e-12)
            for (const cplx& s : root_->singular)
                if (std::abs(z - s) < 1e-12)
                    throw SingularPointError("evaluation at a singular boundary point");
    }

    static cplx eval(const Node& n, cplx z) {
        switch (n.kind) {
            case FuncKind::polynomial:
                return detail::horner(n.params, z);
            case FuncKind::rational:
                return detail::horner(n.params, z) / detail::horner(n.params2, z);
            case FuncKind::blaschke_product: {
                cplx acc(1.0, 0.0);
                for (const cplx& a : n.params) {
                    const double m = std::abs(a);
                    if (m == 0.0) {
                        acc *= z;
                    } else {
                        acc *= (m / a) * (a - z) / (1.0 - std::conj(a) * z);
                    }
                }
                return acc;
            }
            case FuncKind::kernel: {
                const cplx a = n.params[0];
                const cplx d = 1.0 - std::conj(a) * z;
                return (1.0 - std::norm(a)) / (d * d);
            }
            case FuncKind::kernel_power: {
                const cplx a = n.params[0];
                const double t = n.exponent;
                const cplx d = 1.0 - std::conj(a) * z;
                return std::pow(1.0 - std::norm(a), t) * std::exp(-2.0 * t * std::log(d));
            }
            case FuncKind::cauchy_kernel:
                return 1.0 / (1.0 - std::conj(n.params[0]) * z);
            case FuncKind::monomial_power:
                return detail::powi(z, n.power);
            case FuncKind::scalar_multiple:
                return n.params[0] * eval(*n.children[0], z);
            case FuncKind::sum:
                return eval(*n.children[0], z) + eval(*n.children[1], z);
            case FuncKind::product:
                return eval(*n.children[0], z) * eval(*n.children[1], z);
            case FuncKind::composition:
                return eval(*n.children[0], eval(*n.children[1], z));
        }
        return cplx(0.0, 0.0);
    }

    static double eval_abs(const Node& n, cplx z) {
        switch (n.kind) {
            case FuncKind::rational:
                return std::abs(detail::horner(n.params, z)) /
                       std::abs(detail::horner(n.params2, z));
            case FuncKind::blaschke_product: {
                double acc = 1.0;
                for (const cplx& a : n.params) {
                    const double m = std::abs(a);
                    if (m == 0.0) {
                        acc *= std::abs(z);
                    } else {
                        acc *= std::abs(a - z) / std::abs(1.0 - std::conj(a) * z);
                    }
                }
                return acc;
            }
            case FuncKind::kernel: {
                // |k_a(z)| = (1-|a|^2)/|1-conj(a)z|^2, no square root needed
                const cplx a = n.params[0];
                return (1.0 - std::norm(a)) / std::norm(1.0 - std::conj(a) * z);
            }
            case FuncKind::kernel_power: {
                const cplx a = n.params[0];
                const double ratio =
                    (1.0 - std::norm(a)) / std::norm(1.0 - std::conj(a) * z);
                const double t = n.exponent;
                if (t == 1.0) return ratio;
                if (t == 0.5) return std::sqrt(ratio);
                if (t == 2.0) return ratio * ratio;
                return std::pow(ratio, t);
            }
            case FuncKind::cauchy_kernel:
                return 1.0 / std::abs(1.0 - std::conj(n.params[0]) * z);
            case FuncKind::monomial_power:
                return n.power == 0 ? 1.0 : std::pow(std::abs(z), static_cast<double>(n.power));
            case FuncKind::scalar_multiple:
                return std::abs(n.params[0]) * eval_abs(*n.children[0], z);
            case FuncKind::product:
                return eval_abs(*n.children[0], z) * eval_abs(*n.children[1], z);
            case FuncKind::composition:
                return eval_abs(*n.children[0], eval(*n.children[1], z));
            default:
                return std::abs(eval(n, z));
        }
    }

    static std::string print(const Node& n) {
        using detail::fmt_cplx;
        auto list = [](const std::vector<cplx>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ", ";
                s += fmt_cplx(v[i]);
            }
            return s;
        };
        switch (n.kind) {
            case FuncKind::polynomial:
                return "poly(" + list(n.params) + ")";
            case FuncKind::rational:
                return "ratio(poly(" + list(n.params) + "), poly(" + list(n.params2) + "))";
            case FuncKind::blaschke_product:
                return "blaschke(" + list(n.params) + ")";
            case FuncKind::kernel:
                return "kernel(" + fmt_cplx(n.params[0]) + ")";
            case FuncKind::kernel_power:
                return "kpow(" + fmt_cplx(n.params[0]) + ", " +
                       detail::fmt_double(n.exponent) + ")";
            case FuncKind::cauchy_kernel:
                return "cauchy(" + fmt_cplx(n.params[0]) + ")";
            case FuncKind::monomial_power:
                if (n.power == 1) return "z";
                return "pow(z, " + std::to_string(n.power) + ")";
            case FuncKind::scalar_multiple:
                return "mul(" + fmt_cplx(n.params[0]) + ", " + print(*n.children[0]) + ")";
            case FuncKind::sum:
                return "add(" + print(*n.children[0]) + ", " + print(*n.children[1]) + ")";
            case FuncKind::product:
                return "mul(" + print(*n.children[0]) + ", " + print(*n.children[1]) + ")";
            case FuncKind::composition:
                return "compose(" + print(*n.children[0]) + ", " + print(*n.children[1]) + ")";
        }
        return "";
    }

    NodePtr root_;
};

inline DiscFunction operator+(const DiscFunction& f, const DiscFunction& g) {
    return DiscFunction::sum(f, g);
}
inline DiscFunction operator*(const DiscFunction& f, const DiscFunction& g) {
    return DiscFunction::product(f, g);
}
inline DiscFunction operator*(cplx c, const DiscFunction& f) {
    return DiscFunction::scalar_multiple(c, f);
}

} // namespace wco
