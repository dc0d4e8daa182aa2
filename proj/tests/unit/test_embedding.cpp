#include <doctest.h>

#include "muso/embedding.hpp"
#include "oracles.hpp"

using namespace muso;

namespace {

QuadratureRule rule(int res = 64) {
    QuadratureRule r;
    r.resolution = res;
    return r;
}

PhiFunction const_phi(double p, double q, const Box& b, int n = 2) {
    return make_phi(fields::constant(p, b), fields::constant(q, b), n);
}

}  // namespace

TEST_CASE("cutoff profile and gradient") {
    const auto cf = make_cutoff({0, 0}, 0.4, 0.2);
    CHECK(cf.value({0, 0}) == 1.0);
    CHECK(cf.value({0.19, 0}) == 1.0);
    CHECK(cf.value({0.3, 0}) == doctest::Approx(0.5));  // ramp midpoint
    CHECK(cf.value({0.5, 0}) == 0.0);
    CHECK_THROWS_AS(make_cutoff({0, 0}, 0.2, 0.4), std::invalid_argument);

    // finite-difference check along a radial grid inside the ramp
    const double slope_expected = 1.0 / 0.2;
    double max_fd = 0.0;
    for (double r : lin_spaced(0.21, 0.39, 41)) {
        const double h = 1e-7;
        const double fd =
            (cf.value({r + h, 0}) - cf.value({r - h, 0})) / (2 * h);
        max_fd = std::max(max_fd, std::abs(fd));
    }
    CHECK(max_fd == doctest::Approx(slope_expected).epsilon(1e-6));
    // values stay in [0,1]; gradient vanishes off the ramp
    CHECK(norm(cf.gradient({0.1, 0})) == 0.0);
    CHECK(norm(cf.gradient({0.45, 0})) == 0.0);
    CHECK(norm(cf.gradient({0.3, 0})) == doctest::Approx(slope_expected));
}

TEST_CASE("embedding exponent bundle") {
    const Box b = box2d(0, 0, 1, 1);
    SUBCASE("constant p = 2, n = 2 is rejected (needs p+ < n)") {
        auto phi = const_phi(2.0, 0.0, b, 2);
        CHECK_THROWS_AS(embedding_exponents(phi, box_grid(b, 3), 2),
                        std::invalid_argument);
    }
    SUBCASE("constant p, q = 0: eta = 1/n, beta = 0, Q = T = S = 0") {
        auto phi = const_phi(2.0, 0.0, b, 3);
        const auto e = embedding_exponents(phi, box_grid(b, 3), 3);
        CHECK(e.eta_R == doctest::Approx(1.0 / 3));
        CHECK(e.beta_R == doctest::Approx(0.0));
        CHECK(e.Q == doctest::Approx(0.0));
        CHECK(e.T == doctest::Approx(0.0));
        CHECK(e.S == doctest::Approx(0.0));
        CHECK_FALSE(e.eta_warning);
    }
    SUBCASE("frozen arithmetic instance") {
        // p in [1.5, 2], q in [-0.5, 0], n = 3:
        // Q = 0.5 (3-1.5) / (1.5 (3-2)) = 0.5, T = 0.5, S = 0.5
        auto phi = make_phi(fields::affine(1.5, 0.5, 0.0, b),
                            fields::affine(-0.5, 0.5, 0.0, b), 3);
        const auto e = embedding_exponents(phi, box_grid(b, 9), 3);
        CHECK(e.p_minus == doctest::Approx(1.5));
        CHECK(e.p_plus == doctest::Approx(2.0));
        CHECK(e.q_minus == doctest::Approx(-0.5));
        CHECK(e.q_plus == doctest::Approx(0.0));
        CHECK(e.Q == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e.T == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e.S == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e.eta_R == doctest::Approx(1.0 / 3 + 0.5 - 2.0 / 3).epsilon(1e-12));
    }
}

TEST_CASE("main lemma: closed-form constants for constant exponents") {
    SUBCASE("disc center") {
        auto d = domains::disc({0, 0}, 0.5);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        const auto res = main_lemma_check(d, phi, {0, 0}, 0.25, rule());
        CHECK(res.sign_case == SignCase::q_nonneg);
        CHECK(res.implied_C ==
              doctest::Approx(0.16524730314632361).epsilon(2e-3));
    }
    SUBCASE("square corner") {
        auto d = domains::square(1.0);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        const auto res = main_lemma_check(d, phi, {0, 0}, 0.25, rule());
        CHECK(res.implied_C ==
              doctest::Approx(0.33049460629264722).epsilon(2e-3));
    }
    SUBCASE("R-independence across a dyadic scan") {
        auto d = domains::square(1.0);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        std::vector<double> cs;
        for (int k = 2; k <= 8; ++k)
            cs.push_back(
                main_lemma_check(d, phi, {0, 0}, std::pow(2.0, -k), rule())
                    .implied_C);
        for (double c : cs) CHECK(c == doctest::Approx(cs[0]).epsilon(1e-2));
    }
}

TEST_CASE("main lemma: variable exponents stay bounded") {
    auto d = domains::square(1.0);
    auto phi = make_phi(fields::sine(1.6, 0.2, 1.0, 1.0, d.bbox),
                        fields::constant(0.5, d.bbox), 2);
    double worst = 0.0;
    for (int k = 2; k <= 8; ++k) {
        const auto res =
            main_lemma_check(d, phi, {0, 0}, std::pow(2.0, -k), rule());
        CHECK(res.sign_case == SignCase::q_nonneg);
        worst = std::max(worst, res.implied_C);
    }
    CHECK(worst < 1.0);
}

TEST_CASE("main lemma: sign-case preconditions") {
    auto d = domains::square(1.0);
    // q < 0 with p- + q- < 1 violates the case precondition
    auto phi = make_phi(fields::constant(1.2, d.bbox),
                        fields::constant(-0.5, d.bbox), 2);
    CHECK_THROWS_AS(main_lemma_check(d, phi, {0, 0}, 0.25, rule()),
                    std::invalid_argument);
    // and the same q with a safer p passes
    auto ok = make_phi(fields::constant(1.8, d.bbox),
                       fields::constant(-0.5, d.bbox), 2);
    const auto res = main_lemma_check(d, ok, {0, 0}, 0.25, rule());
    CHECK(res.sign_case == SignCase::q_negative);
    CHECK(res.kappa == doctest::Approx(res.exponents.Q));
}

TEST_CASE("density from scan") {
    SUBCASE("square corner with constant exponents reduces to measure density") {
        auto d = domains::square(1.0);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        std::vector<double> radii;
        for (int k = 4; k <= 9; ++k) radii.push_back(std::pow(2.0, -k));
        const auto res = density_from_scan(d, phi, {0, 0}, radii, rule(), 0.0);
        CHECK(res.c_density == doctest::Approx(M_PI / 4).epsilon(5e-3));
        // eta lower bound from the scan rows (constant p: eta = 1/n exactly)
        for (const auto& row : res.rows)
            CHECK(row.eta == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("disc center sees full balls") {
        auto d = domains::disc({0, 0}, 0.5);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        const auto res =
            density_from_scan(d, phi, {0, 0}, {1.0 / 16, 1.0 / 32}, rule(), 0.0);
        CHECK(res.c_density == doctest::Approx(M_PI).epsilon(5e-3));
    }
    SUBCASE("cusp tip decays across the scan") {
        auto d = domains::power_cusp(2.0);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        std::vector<double> radii;
        for (int k = 4; k <= 10; ++k) radii.push_back(std::pow(2.0, -k));
        QuadratureRule r = rule(24);
        r.refine_depth = 4;
        const auto res = density_from_scan(d, phi, {0, 0}, radii, r, 0.0);
        CHECK(res.rows.front().value >= 8.0 * res.rows.back().value);
    }
    SUBCASE("radii above r0 are rejected") {
        auto d = domains::square(1.0);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        CHECK(density_scan_r0(0.0, 2) == doctest::Approx(0.125));
        CHECK_THROWS_AS(density_from_scan(d, phi, {0, 0}, {0.25}, rule(), 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("scan invariants from the continuity constant") {
    auto d = domains::square(1.0);
    auto phi = make_phi(fields::log_bump(1.4, 0.4, 0.5, {0, 0}, d.bbox),
                        fields::constant(0.0, d.bbox), 2);
    const double c_log = 0.5;
    const double r0 = density_scan_r0(c_log, 2);
    std::vector<double> radii;
    for (int k = 6; k <= 10; ++k)
        if (std::pow(2.0, -k) <= r0) radii.push_back(std::pow(2.0, -k));
    REQUIRE(!radii.empty());
    const auto res = density_from_scan(d, phi, {0, 0}, radii, rule(), c_log);
    const double eta_floor = 0.5 - c_log / std::log(1.0 / (2 * r0));
    for (const auto& row : res.rows) {
        CHECK(row.eta >= eta_floor);
        // radius bound from the continuity constant
        const double gap = row.p_plus - row.p_minus;
        CHECK(std::pow(row.R, gap) >=
              std::exp(-c_log) / std::pow(2.0, gap) - 1e-12);
    }
}

TEST_CASE("norm chain for cutoffs") {
    auto d = domains::square(1.0);
    auto phi = const_phi(1.5, 0.5, d.bbox, 2);
    const Point c{0.5, 0.5};
    const double R = 0.4, Rt = 0.2;
    const auto cf = make_cutoff(c, R, Rt);
    const auto q = rule(96);

    auto u = sample_function(d, [&](const Point& p) { return cf.value(p); }, q);
    auto inner = sample_function(
        d, [&](const Point& p) { return dist(p, c) < Rt ? 1.0 : 0.0; }, q);
    auto outer = sample_function(
        d, [&](const Point& p) { return dist(p, c) < R ? 1.0 : 0.0; }, q);
    auto grad_mag = sample_function(
        d, [&](const Point& p) { return norm(cf.gradient(p)); }, q);

    const double slack = 1e-3;
    CHECK(luxemburg_norm(inner, psi_integrand(phi)) <=
          luxemburg_norm(u, psi_integrand(phi)) * (1 + slack));
    CHECK(luxemburg_norm(grad_mag, phi) <=
          (1.0 / (R - Rt)) * luxemburg_norm(outer, phi) * (1 + slack));
}

TEST_CASE("embedding ratio scan") {
    SUBCASE("constant one on the unit square has ratio 1") {
        auto d = domains::square(1.0);
        auto phi = const_phi(1.5, 0.0, d.bbox, 2);
        TestFamily fam{"single", {{"const_one",
                                   [](const Point&) { return 1.0; },
                                   [](const Point&) { return Point{}; }}}};
        const auto rep = embedding_ratio_scan(d, phi, fam, rule(48));
        REQUIRE(rep.rows.size() == 1);
        CHECK(rep.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("named family is stable under refinement") {
        auto d = domains::square(1.0);
        auto phi = const_phi(1.5, 0.5, d.bbox, 2);
        const auto fam = named_test_family("square_v1", d);
        const auto lo = embedding_ratio_scan(d, phi, fam, rule(48));
        const auto hi = embedding_ratio_scan(d, phi, fam, rule(96));
        CHECK(std::abs(hi.sup_ratio - lo.sup_ratio) / hi.sup_ratio < 0.05);
    }
    SUBCASE("cusp family ratios grow with kappa") {
        const Box bb = box2d(0, -1, 1, 1);
        auto phi = const_phi(1.5, 0.0, bb, 2);
        double prev = 0.0;
        for (double kappa : {1.0, 2.0, 3.0}) {
            auto d = domains::power_cusp(kappa);
            const auto fam = named_test_family("cusp_tip_v1", d);
            QuadratureRule r = rule(96);
            const auto rep = embedding_ratio_scan(d, phi, fam, r);
            CHECK(rep.sup_ratio >= prev);
            prev = rep.sup_ratio;
        }
    }
    SUBCASE("input validation") {
        auto d = domains::square(1.0);
        auto phi_big = const_phi(2.5, 0.0, d.bbox, 2);
        const auto fam = named_test_family("square_v1", d);
        CHECK_THROWS_AS(embedding_ratio_scan(d, phi_big, fam, rule(16)),
                        std::invalid_argument);
        auto seg = domains::interval(0, 1);
        auto phi1 = const_phi(1.5, 0.0, seg.bbox, 1);
        CHECK_THROWS_AS(embedding_ratio_scan(seg, phi1, fam, rule(16)),
                        std::invalid_argument);
        CHECK_THROWS_AS(named_test_family("nope", d), std::invalid_argument);
    }
}

TEST_CASE("exponent case agrees with the norm-bounds case detection") {
    auto d = domains::square(1.0);
    auto phi = make_phi(fields::constant(1.6, d.bbox),
                        fields::affine(-0.3, 1.0, 0.0, d.bbox), 2);
    const auto pts = ball_region_points(d, {0.5, 0.5}, 0.4);
    const auto e = embedding_exponents(phi, pts, 2);
    CHECK(e.sign_case == detect_sign_case(phi, pts));
    CHECK(e.sign_case == SignCase::q_mixed);
}

TEST_CASE("main lemma rejects an empty intersection") {
    auto d = domains::square(1.0);
    auto phi = const_phi(1.5, 0.0, d.bbox, 2);
    CHECK_THROWS_AS(main_lemma_check(d, phi, {-5.0, -5.0}, 0.1, rule()),
                    std::invalid_argument);
}
