#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wco/estimators.hpp"

using namespace wco;
using Catch::Approx;

namespace {

const Exponent p1 = Exponent::finite(1);
const Exponent p2 = Exponent::finite(2);
const Exponent p4 = Exponent::finite(4);
const Exponent pinf = Exponent::infinity();

DiscFunction one() { return DiscFunction::constant(cplx(1, 0)); }
SelfMap id_map() { return SelfMap(DiscFunction::identity()); }
SelfMap half_map() {
    return SelfMap(DiscFunction::scalar_multiple(cplx(0.5, 0), DiscFunction::identity()));
}
SelfMap square_map() { return SelfMap(DiscFunction::monomial(2)); }
SelfMap blaschke3() {
    return SelfMap(DiscFunction::blaschke({cplx(0, 0), cplx(0.5, 0), cplx(-0.3, 0)}));
}
SelfMap parabolic() {  // (1+z)/2
    return SelfMap(DiscFunction::polynomial({cplx(0.5, 0), cplx(0.5, 0)}));
}

Settings fast_cfg() {
    Settings cfg;
    cfg.grid = 1 << 12;
    cfg.ring.k_max = 12;
    cfg.trunc_degree = 128;
    return cfg;
}

} // namespace

TEST_CASE("kernel integral closed forms") {
    // Poisson normalization, any exponent pair with q/p = 1
    for (double a : {0.0, 0.3, 0.9})
        CHECK(kernel_integral(one(), id_map(), p2, p2, cplx(a, 0), 1 << 12) ==
              Approx(1.0).margin(1e-10));
    // exponent 2: (1+|a|^2)/(1-|a|^2)
    CHECK(kernel_integral(one(), id_map(), p2, p4, cplx(0.5, 0), 1 << 12) ==
          Approx(5.0 / 3.0).margin(1e-9));
    // phi = z/2, real a: (1-a^2)/(1-a^2/4)
    for (double a : {0.2, 0.7}) {
        const double expect = (1 - a * a) / (1 - a * a / 4);
        CHECK(kernel_integral(one(), half_map(), p2, p2, cplx(a, 0), 1 << 12) ==
              Approx(expect).margin(1e-10));
    }
}

TEST_CASE("test-vector identity: shared-cache sweep equals tree-route hardy norms") {
    // ||u (k_a^{1/p} o phi)||_q^q == kernel integral, evaluated two ways
    std::vector<std::pair<DiscFunction, SelfMap>> fam;
    fam.emplace_back(one(), half_map());
    fam.emplace_back(DiscFunction::polynomial({cplx(0.7, 0), cplx(0.3, 0)}), square_map());
    for (const auto& [u, phi] : fam) {
        for (cplx a : {cplx(0.5, 0), cplx(-0.3, 0.6), cplx(0.9, 0)}) {
            const double ki = kernel_integral(u, phi, p2, p2, a, 1 << 12);
            const auto tv = u * DiscFunction::compose(kernel_power(a, p2), phi.map());
            const double hn = hardy_norm(tv, p2, 1 << 12);
            CHECK(std::pow(ki, 0.5) == Approx(hn).epsilon(1e-9));
        }
    }
}

TEST_CASE("boundedness for p <= q") {
    auto cfg = fast_cfg();
    auto b1 = boundedness_pq(one(), id_map(), p2, p2, cfg);
    CHECK(b1.bounded);
    CHECK(b1.sup_estimate == Approx(1.0).margin(1e-9));

    auto b2 = boundedness_pq(one(), id_map(), p2, p4, cfg);
    CHECK(!b2.bounded);
    CHECK(!b2.undecided);

    auto b3 = boundedness_pq(one(), half_map(), p2, p2, cfg);
    CHECK(b3.bounded);
    CHECK(b3.sup_estimate == Approx(1.0).margin(1e-9));  // attained at a = 0
}

TEST_CASE("p <= q bracket values") {
    auto cfg = fast_cfg();
    auto rid = analyze(one(), id_map(), p2, p2, cfg);
    REQUIRE(rid.bracket);
    CHECK(rid.bracket->lower == Approx(1.0).margin(1e-6));
    CHECK(rid.bracket->upper == Approx(1.0).margin(1e-6));
    CHECK(rid.bracket->lower_const == 1.0);
    CHECK(rid.bracket->upper_const == 2.0);

    auto rsq = analyze(one(), square_map(), p2, p2, cfg);
    CHECK(rsq.bracket->lower == Approx(1.0).margin(1e-6));
    CHECK(rsq.bracket->upper == Approx(1.0).margin(1e-6));

    auto rh = analyze(one(), half_map(), p2, p2, cfg);
    CHECK(rh.bracket->upper <= 0.08);  // ring k_max = 12 here
    CHECK(rh.bracket->compact);

    // p = 1 tags the halved lower constant
    auto r1 = analyze(one(), square_map(), p1, p1, cfg);
    CHECK(r1.regime == "p1_le_q");
    CHECK(r1.bracket->lower_const == 0.5);
    CHECK(r1.bracket->lower == Approx(1.0).margin(1e-6));
}

TEST_CASE("boundedness into H^inf") {
    auto b = boundedness_p_inf(one(), half_map(), p2);
    CHECK(b.bounded);
    CHECK(b.sup_estimate == Approx(4.0 / 3.0).epsilon(1e-3));

    auto bu = boundedness_p_inf(one(), id_map(), p2);
    CHECK(!bu.bounded);

    // scalar weight scales the sup by |c|^p
    auto bc = boundedness_p_inf(DiscFunction::constant(cplx(0.5, 0)), half_map(), p1);
    CHECK(bc.sup_estimate == Approx(0.5 * 4.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("M_phi and the H^p -> H^inf bracket") {
    // ||phi||_inf < 1: compact, bracket [0,0], no M_phi needed
    auto b = essnorm_p_inf(one(), half_map(), p2);
    CHECK(b.compact);
    CHECK(b.effective_lower() == 0.0);
    CHECK(b.effective_upper() == 0.0);

    CHECK_THROWS_AS(m_phi(one(), half_map(), p2), ValidationError);

    // u = (1-z)^2 against phi = (1+z)/2 at p = 1: the tangential limit is 4
    auto u = DiscFunction::polynomial({cplx(1, 0), cplx(-2, 0), cplx(1, 0)});
    auto bt = boundedness_p_inf(u, parabolic(), p1);
    CHECK(bt.bounded);
    CHECK(bt.sup_estimate == Approx(4.0).epsilon(1e-3));
    auto m = m_phi(u, parabolic(), p1);
    CHECK(!m.infinite);
    CHECK(m.value == Approx(4.0).epsilon(0.05));
    auto br = essnorm_p_inf(u, parabolic(), p1);
    CHECK(!br.compact);
    CHECK(br.lower_const == 0.5);
    CHECK(br.effective_lower() <= br.effective_upper() + 1e-9);

    // u == 1, phi = z: the ratio explodes level after level
    auto mi = m_phi(one(), id_map(), p2);
    CHECK(mi.infinite);
}

TEST_CASE("extremal integral") {
    Settings cfg;
    // E_phi = T for the identity
    auto e1 = extremal_integral(one(), id_map(), 2.0, cfg.eps_k_min, cfg.eps_k_max, 1 << 12);
    CHECK(e1.value == Approx(1.0).margin(1e-12));
    // |phi*| = 1/2 everywhere: empty superlevel sets
    auto e2 = extremal_integral(one(), half_map(), 2.0, cfg.eps_k_min, cfg.eps_k_max, 1 << 12);
    CHECK(e2.value == 0.0);
    // Blaschke: |phi*| = 1 a.e.
    auto e3 = extremal_integral(one(), blaschke3(), 2.0, cfg.eps_k_min, cfg.eps_k_max, 1 << 12);
    CHECK(e3.value == Approx(1.0).margin(1e-6));
    // (1+z)/2: measure-zero extremal set; the discrete remnant is one grid
    // point out of M
    auto e4 = extremal_integral(one(), parabolic(), 2.0, cfg.eps_k_min, cfg.eps_k_max, 1 << 12);
    CHECK(e4.value == Approx(1.0 / (1 << 12)).margin(1e-12));
    // a schedule stopping at k = 12 cannot stabilize for this map
    CHECK_THROWS_AS(extremal_integral(one(), parabolic(), 2.0, 3, 12, 1 << 12),
                    NonConvergentError);
}

TEST_CASE("H^inf -> H^q brackets") {
    auto cfg = fast_cfg();
    auto b = essnorm_inf_q(one(), blaschke3(), p2, cfg);
    CHECK(b.lower == Approx(1.0).margin(1e-6));
    CHECK(b.upper == Approx(1.0).margin(1e-6));
    CHECK(b.effective_lower() == Approx(0.5).margin(1e-6));
    CHECK(b.effective_upper() == Approx(2.0).margin(1e-6));
    CHECK(!b.compact);

    auto bc = essnorm_inf_q(one(), half_map(), p2, cfg);
    CHECK(bc.effective_upper() == 0.0);
    CHECK(bc.compact);

    auto bp = essnorm_inf_q(one(), parabolic(), p2, cfg);
    CHECK(bp.compact);
}

TEST_CASE("power norm sequence") {
    const std::vector<std::size_t> ns = {1, 2, 4, 8, 16};
    auto s1 = power_norm_sequence(one(), square_map(), p2, ns, 1 << 12);
    for (const auto& [n, v] : s1) CHECK(v == Approx(1.0).margin(1e-10));
    auto s2 = power_norm_sequence(one(), half_map(), p2, ns, 1 << 12);
    for (const auto& [n, v] : s2)
        CHECK(v == Approx(std::pow(0.5, double(n))).epsilon(1e-9));
    auto s3 = power_norm_sequence(one(), parabolic(), p2, {1, 4, 16, 64}, 1 << 12);
    for (std::size_t i = 1; i < s3.size(); ++i) CHECK(s3[i].second < s3[i - 1].second);
}

TEST_CASE("power norm limit re-estimates the extremal integral") {
    auto cfg = fast_cfg();
    std::vector<SelfMap> maps;
    maps.push_back(blaschke3());
    maps.push_back(square_map());
    for (const auto& phi : maps) {
        const auto ext =
            extremal_integral(one(), phi, 2.0, cfg.eps_k_min, cfg.eps_k_max, cfg.grid);
        const auto seq = power_norm_sequence(one(), phi, p2, {256}, cfg.grid);
        CHECK(seq.back().second == Approx(std::pow(ext.value, 0.5)).margin(1e-3));
    }
}

TEST_CASE("p > q brackets") {
    auto cfg = fast_cfg();
    Diagnostics diag;
    CarlesonCertificate cert;
    std::vector<std::string> notes;
    auto b = essnorm_p_gt_q(one(), blaschke3(), p4, p2, cfg, &diag, &cert, &notes);
    CHECK(cert.is_carleson);
    CHECK(b.lower == Approx(1.0).margin(1e-6));
    // phi(0) = 0 makes the composition-norm surrogate equal to 1
    CHECK(b.upper == Approx(1.0).margin(1e-6));
    CHECK(b.effective_upper() == Approx(2.0).margin(1e-6));
    REQUIRE(!notes.empty());
    CHECK(notes[0].find("surrogate") != std::string::npos);

    auto bh = essnorm_p_gt_q(one(), half_map(), p4, p2, cfg);
    CHECK(bh.effective_upper() == 0.0);
    CHECK(bh.compact);

    CHECK_THROWS_AS(essnorm_p_gt_q(one(), half_map(), p2, p4, cfg), ValidationError);
}

TEST_CASE("analyze dispatch and status codes") {
    auto cfg = fast_cfg();
    CHECK(analyze(one(), id_map(), p2, p2, cfg).regime == "p_le_q_finite");
    CHECK(analyze(one(), id_map(), p1, p2, cfg).regime == "p1_le_q");
    CHECK(analyze(one(), half_map(), p2, pinf, cfg).regime == "hp_to_hinf");
    CHECK(analyze(one(), blaschke3(), pinf, p2, cfg).regime == "hinf_to_hq");
    CHECK(analyze(one(), blaschke3(), p4, p2, cfg).regime == "p_gt_q_finite");

    CHECK(analyze(one(), id_map(), p2, p4, cfg).status == "unbounded");
    CHECK(analyze(one(), id_map(), p2, pinf, cfg).status == "unbounded");
    CHECK(analyze(one(), id_map(), pinf, pinf, cfg).status == "undecided");

    // u == 0 violates the standing hypothesis
    CHECK_THROWS_AS(analyze(DiscFunction::constant(cplx(0, 0)), id_map(), p2, p2, cfg),
                    ValidationError);

    // compact q = inf path from the worked example
    auto rc = analyze(one(), half_map(), p2, pinf, cfg);
    CHECK(rc.bracket->compact);
    CHECK(rc.bracket->effective_upper() == 0.0);
}

TEST_CASE("bracket ordering and the truncation cross-check intersect") {
    auto cfg = fast_cfg();
    std::vector<std::pair<DiscFunction, SelfMap>> h2fam;
    h2fam.emplace_back(one(), id_map());
    h2fam.emplace_back(one(), square_map());
    h2fam.emplace_back(one(), half_map());
    h2fam.emplace_back(one(), SelfMap(DiscFunction::blaschke({cplx(0, 0), cplx(0.5, 0)})));
    for (const auto& [u, phi] : h2fam) {
        auto rep = analyze(u, phi, p2, p2, cfg);
        REQUIRE(rep.bracket);
        CHECK(rep.bracket->effective_lower() <= rep.bracket->effective_upper() + 1e-9);
        REQUIRE(rep.trunc_upper);
        // both intervals hug the same essential norm
        const double klo = rep.bracket->effective_lower();
        const double kup = rep.bracket->effective_upper();
        const double tlo = rep.trunc_lower->estimate;
        const double tup = rep.trunc_upper->estimate;
        CHECK(tlo <= kup + 1e-6);
        CHECK(klo <= tup + 1e-6);
    }
}

TEST_CASE("analyze is stable under one grid doubling") {
    Settings c1 = fast_cfg();
    Settings c2 = fast_cfg();
    c2.grid = c1.grid * 2;
    for (const auto& phi : {id_map(), square_map()}) {
        auto r1 = analyze(one(), phi, p2, p2, c1);
        auto r2 = analyze(one(), phi, p2, p2, c2);
        CHECK(r1.bracket->upper == Approx(r2.bracket->upper).margin(1e-6));
        CHECK(r1.bracket->lower == Approx(r2.bracket->lower).margin(1e-6));
    }
}
