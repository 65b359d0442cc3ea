#include <catch2/catch_amalgamated.hpp>

#include "wco/discfunction.hpp"
#include "wco/funcspace.hpp"

using namespace wco;
using Catch::Approx;

namespace {
cplx ev(const DiscFunction& f, cplx z) { return f.evaluate(z); }
}

TEST_CASE("polynomial evaluation") {
    auto f = DiscFunction::polynomial({cplx(1, 0), cplx(2, 0), cplx(3, 0)});
    CHECK(ev(f, cplx(0, 0)) == cplx(1, 0));
    CHECK(ev(f, cplx(0.5, 0)).real() == Approx(1 + 1 + 0.75));
}

TEST_CASE("kernel evaluation matches the closed form") {
    // k_0 is the constant 1
    auto k0 = DiscFunction::kernel(cplx(0, 0));
    CHECK(ev(k0, cplx(0.7, 0)) == cplx(1, 0));
    // k_{1/2}(1/2) = 0.75 / 0.5625 = 4/3
    auto kh = DiscFunction::kernel(cplx(0.5, 0));
    CHECK(ev(kh, cplx(0.5, 0)).real() == Approx(4.0 / 3.0));
    CHECK(ev(kh, cplx(0, 0)).real() == Approx(0.75));
}

TEST_CASE("kernel power uses the principal branch") {
    auto f = DiscFunction::kernel_power(cplx(0.5, 0), 0.5);
    // (1-0.25)^{1/2} (1-0.25)^{-1} = sqrt(4/3) at z = 0.5
    CHECK(std::abs(ev(f, cplx(0.5, 0))) == Approx(std::sqrt(4.0 / 3.0)));
    // exponent 1 reproduces the kernel itself at random points
    auto k = DiscFunction::kernel(cplx(0.3, 0.2));
    auto k1 = DiscFunction::kernel_power(cplx(0.3, 0.2), 1.0);
    for (cplx z : {cplx(0.1, 0.4), cplx(-0.6, 0.2), cplx(0, 0)})
        CHECK(std::abs(ev(k, z) - ev(k1, z)) < 1e-14);
}

TEST_CASE("cauchy kernel is the geometric series") {
    auto f = DiscFunction::cauchy_kernel(cplx(0.5, 0));
    CHECK(ev(f, cplx(0, 0)) == cplx(1, 0));
    auto c = taylor_coefficients(f, 8, 0.75).coefficients;
    for (std::size_t n = 0; n <= 8; ++n)
        CHECK(std::abs(c[n] - std::pow(0.5, double(n))) < 1e-12);
}

TEST_CASE("blaschke products are unimodular on the circle") {
    auto b = DiscFunction::blaschke({cplx(0, 0), cplx(0.5, 0), cplx(-0.3, 0.1)});
    for (std::size_t j = 0; j < 16; ++j) {
        const cplx zeta = unit_root(j, 16);
        CHECK(std::abs(b.evaluate(zeta)) == Approx(1.0).epsilon(1e-12));
    }
    CHECK(std::abs(b.evaluate(cplx(0.2, 0.3))) < 1.0);
}

TEST_CASE("domain errors") {
    auto k = DiscFunction::kernel(cplx(0.5, 0));
    CHECK_THROWS_AS(k.evaluate(cplx(1.5, 0)), OutsideDomainError);
    CHECK_THROWS_AS(DiscFunction::kernel(cplx(1.0, 0)), OutsideDomainError);
    CHECK_THROWS_AS(DiscFunction::blaschke({cplx(1.2, 0)}), OutsideDomainError);
}

TEST_CASE("rational denominators: circle roots become singular points") {
    // 1/(1-z) has its only denominator root at z = 1
    auto f = DiscFunction::rational({cplx(1, 0)}, {cplx(1, 0), cplx(-1, 0)});
    REQUIRE(f.singular_points().size() == 1);
    CHECK(std::abs(f.singular_points()[0] - cplx(1, 0)) < 1e-9);
    CHECK_THROWS_AS(f.evaluate(cplx(1, 0)), SingularPointError);
    CHECK(std::abs(f.evaluate(cplx(0.5, 0)) - cplx(2, 0)) < 1e-12);
    // a root inside the disk is rejected outright
    CHECK_THROWS_AS(DiscFunction::rational({cplx(1, 0)}, {cplx(1, 0), cplx(-2, 0)}),
                    ValidationError);
}

TEST_CASE("arithmetic closure") {
    auto f = DiscFunction::polynomial({cplx(1, 0), cplx(1, 0)});
    auto g = DiscFunction::monomial(2);
    auto s = f + g;
    auto p = f * g;
    auto c = DiscFunction::compose(f, g);  // 1 + z^2
    const cplx z(0.3, -0.2);
    CHECK(std::abs(s.evaluate(z) - (f.evaluate(z) + g.evaluate(z))) < 1e-15);
    CHECK(std::abs(p.evaluate(z) - f.evaluate(z) * g.evaluate(z)) < 1e-15);
    CHECK(std::abs(c.evaluate(z) - (cplx(1, 0) + z * z)) < 1e-15);
}

TEST_CASE("evaluate_abs agrees with |evaluate| across kinds") {
    std::vector<DiscFunction> fam = {
        DiscFunction::polynomial({cplx(1, 0), cplx(-0.5, 0.25)}),
        DiscFunction::kernel(cplx(0.4, 0.3)),
        DiscFunction::kernel_power(cplx(0.4, 0.3), 0.5),
        DiscFunction::kernel_power(cplx(0.2, -0.1), 1.0 / 3.0),
        DiscFunction::cauchy_kernel(cplx(-0.3, 0.2)),
        DiscFunction::blaschke({cplx(0.5, 0), cplx(0, 0)}),
        DiscFunction::monomial(3),
        DiscFunction::rational({cplx(1, 0), cplx(1, 0)}, {cplx(2, 0), cplx(0.5, 0)}),
    };
    auto sum = fam[0] + fam[1];
    auto prod = fam[2] * fam[5];
    auto comp = DiscFunction::compose(fam[1], fam[6]);
    fam.push_back(sum);
    fam.push_back(prod);
    fam.push_back(comp);
    for (const auto& f : fam) {
        for (cplx z : {cplx(0.1, 0.2), cplx(-0.7, 0.1), cplx(0.9, 0), cplx(0, -0.95)}) {
            CHECK(f.evaluate_abs(z) ==
                  Approx(std::abs(f.evaluate(z))).margin(1e-13).epsilon(1e-12));
        }
    }
}

TEST_CASE("canonical text round-trips structurally") {
    auto f = DiscFunction::compose(
        DiscFunction::kernel(cplx(0.5, 0.25)),
        DiscFunction::scalar_multiple(cplx(0.5, 0), DiscFunction::monomial(2)));
    CHECK(f.to_string() == "compose(kernel(complex(0.5, 0.25)), mul(0.5, pow(z, 2)))");
}
