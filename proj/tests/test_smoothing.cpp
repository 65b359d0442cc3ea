#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wco/funcspace.hpp"
#include "wco/smoothing.hpp"

using namespace wco;
using Catch::Approx;

namespace {

CoefficientVector random_poly(std::mt19937& rng, std::size_t deg) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    CoefficientVector c(deg + 1);
    for (auto& x : c) x = cplx(d(rng), d(rng));
    return c;
}

CoefficientVector normalize_h1(const CoefficientVector& c, std::size_t M = 8192) {
    const double n = hardy_norm(to_function(c), Exponent::finite(1), M);
    CoefficientVector out = c;
    for (auto& x : out) x /= n;
    return out;
}

} // namespace

TEST_CASE("fejer multiplier examples") {
    CoefficientVector c = {cplx(1, 0), cplx(1, 0), cplx(1, 0)};
    auto a = fejer_apply(c, 2);
    CHECK(a[0] == cplx(1, 0));
    CHECK(a[1] == cplx(0.5, 0));
    CHECK(a[2] == cplx(0, 0));
    auto r = fejer_remainder(c, 2);
    CHECK(r[0] == cplx(0, 0));
    CHECK(r[1] == cplx(0.5, 0));
    CHECK(r[2] == cplx(1, 0));
    // N beyond the degree: multipliers only
    auto a2 = fejer_apply(c, 8);
    CHECK(a2[2] == cplx(0.75, 0));
    // monomial far beyond N is untouched by the remainder
    CoefficientVector mono(17, cplx(0, 0));
    mono[16] = cplx(1, 0);
    CHECK(fejer_remainder(mono, 8) == mono);
}

TEST_CASE("fejer apply + remainder is the identity, coefficientwise") {
    std::mt19937 rng(601);
    for (int rep = 0; rep < 20; ++rep) {
        const auto c = random_poly(rng, 32);
        for (std::size_t N : {1u, 3u, 8u, 64u}) {
            const auto a = fejer_apply(c, N);
            const auto r = fejer_remainder(c, N);
            for (std::size_t n = 0; n < c.size(); ++n)
                CHECK(std::abs(a[n] + r[n] - c[n]) == 0.0);
        }
    }
}

TEST_CASE("dirichlet truncation") {
    CoefficientVector c = {cplx(1, 0), cplx(2, 0), cplx(3, 0)};
    CHECK(dirichlet_apply(c, 1) == CoefficientVector{cplx(1, 0), cplx(2, 0)});
    CHECK(dirichlet_apply(c, 0) == CoefficientVector{cplx(1, 0)});
    CHECK(dirichlet_apply(c, 9) == c);
}

TEST_CASE("remainder_sup_bound closed form") {
    CHECK(remainder_sup_bound(0.5, 1) == Approx(1.0));
    // direct summation oracle
    for (double r : {0.3, 0.5, 0.8}) {
        for (std::size_t N : {2u, 8u, 32u}) {
            double partial = 0.0;
            for (std::size_t n = 1; n < N; ++n)
                partial += double(n) * std::pow(r, double(n));
            const double expect = partial / double(N) + std::pow(r, double(N)) / (1.0 - r);
            CHECK(remainder_sup_bound(r, N) == Approx(expect).epsilon(1e-13));
        }
    }
    // vanishes as N grows
    CHECK(remainder_sup_bound(0.5, 4096) < 1e-10);
}

TEST_CASE("choose_N") {
    CHECK(choose_N(0.5, 0.1, Exponent::finite(1)) == 40);
    CHECK(choose_N(0.5, 16.0, Exponent::finite(1)) == 1);
    // nonincreasing as r shrinks at fixed eps
    std::size_t prev = choose_N(0.9, 0.05, Exponent::finite(2));
    for (double r : {0.7, 0.5, 0.3, 0.1}) {
        const std::size_t n = choose_N(r, 0.05, Exponent::finite(2));
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("pointwise remainder bound dominates |R_N f(w)| on the H^1 ball") {
    std::mt19937 rng(602);
    for (int rep = 0; rep < 25; ++rep) {
        const auto f = normalize_h1(random_poly(rng, 48));
        for (double r : {0.3, 0.8}) {
            for (std::size_t N : {8u, 32u}) {
                const auto rem = fejer_remainder(f, N);
                const auto rf = to_function(rem);
                double peak = 0.0;
                for (std::size_t j = 0; j < 1024; ++j)
                    peak = std::max(peak, rf.evaluate_abs(r * unit_root(j, 1024)));
                CHECK(peak <= remainder_sup_bound(r, N) + 1e-10);
            }
        }
    }
}

TEST_CASE("fejer means contract H^1 and the remainder is 2-bounded") {
    std::mt19937 rng(603);
    for (int rep = 0; rep < 15; ++rep) {
        const auto c = random_poly(rng, 48);
        const auto f = to_function(c);
        for (std::size_t N : {4u, 16u, 64u}) {
            CHECK(hardy_norm(to_function(fejer_apply(c, N)), Exponent::finite(1), 8192) <=
                  hardy_norm(f, Exponent::finite(1), 8192) + 1e-10);
            for (double p : {1.0, 2.0}) {
                CHECK(hardy_norm(to_function(fejer_remainder(c, N)), Exponent::finite(p),
                                 8192) <=
                      2.0 * hardy_norm(f, Exponent::finite(p), 8192) + 1e-10);
            }
        }
    }
}

TEST_CASE("fejer remainder fades like deg^2 max|c| / N") {
    std::mt19937 rng(604);
    const std::size_t deg = 12;
    const auto c = random_poly(rng, deg);
    double cmax = 0.0;
    for (const auto& x : c) cmax = std::max(cmax, std::abs(x));
    for (std::size_t N : {16u, 64u, 256u, 1024u}) {
        const double rn = hardy_norm(to_function(fejer_remainder(c, N)),
                                     Exponent::finite(1), 4096);
        CHECK(rn <= double(deg) * cmax * double(deg) / double(N) + 1e-12);
    }
}
