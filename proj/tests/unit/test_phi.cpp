#include <doctest.h>

#include "muso/phi.hpp"
#include "oracles.hpp"

using namespace muso;

namespace {

PhiFunction const_phi(double p, double q, int n = 2) {
    const Box b = box2d(0, 0, 1, 1);
    return make_phi(fields::constant(p, b), fields::constant(q, b), n);
}

const Point kX{0.5, 0.5};

}  // namespace

TEST_CASE("eval_phi basics") {
    auto phi = const_phi(2.0, 0.0);
    CHECK(eval_phi(phi, kX, 3.0) == doctest::Approx(9.0));
    CHECK(eval_phi(phi, kX, 0.0) == 0.0);
    auto phi11 = const_phi(1.0, 1.0);
    CHECK(eval_phi(phi11, kX, 0.0) == 0.0);
    // t = e^2 - e makes log(e+t) = 2 exactly
    const double t = kE * kE - kE;
    CHECK(eval_phi(phi11, kX, t) == doctest::Approx(9.34154854094321).epsilon(1e-12));
    CHECK_THROWS_AS(eval_phi(phi11, kX, -1.0), std::invalid_argument);
}

TEST_CASE("sobolev conjugate") {
    CHECK(sobolev_conjugate(2.0, 4) == doctest::Approx(4.0));
    CHECK(sobolev_conjugate(2.0, 3) == doctest::Approx(6.0));
    CHECK(sobolev_conjugate(1.5, 2) == doctest::Approx(6.0));
    CHECK_THROWS_AS(sobolev_conjugate(2.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_conjugate(5.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_conjugate(0.5, 2), std::invalid_argument);
}

TEST_CASE("eval_psi") {
    auto phi = const_phi(2.0, 0.0, 4);
    CHECK(eval_psi(phi, kX, 2.0) == doctest::Approx(16.0));  // psi(t) = t^4
    CHECK(eval_psi(phi, kX, 0.0) == 0.0);
    auto phi22 = const_phi(2.0, 2.0, 4);
    // p* = 4, exponent on the log factor = 2*4/2 = 4
    CHECK(eval_psi(phi22, kX, 1.0) ==
          doctest::Approx(2.9744392148233299).epsilon(1e-12));
    auto bad = const_phi(2.0, 0.0, 2);  // p = n
    CHECK_THROWS_AS(eval_psi(bad, kX, 1.0), std::invalid_argument);
}

TEST_CASE("psi consistency: 1/p* = 1/p - 1/n pointwise") {
    const Box b = box2d(0, 0, 1, 1);
    auto phi = make_phi(fields::affine(1.5, 0.3, 0.1, b),
                        fields::constant(0.5, b), 3);
    for (const Point& x : box_grid(b, 9)) {
        const double p = phi.p(x);
        const double ps = sobolev_conjugate(p, phi.dimension);
        CHECK(std::abs(1.0 / ps - 1.0 / p + 1.0 / 3.0) < 1e-12);
    }
}

TEST_CASE("invert_phi") {
    auto phi = const_phi(2.0, 0.0);
    CHECK(invert_phi(phi, kX, 9.0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(invert_phi(phi, kX, 0.0) == 0.0);

    auto phi11 = const_phi(1.0, 1.0);
    const double t = kE * kE - kE;  // 4.670774...
    const double s = eval_phi(phi11, kX, t);
    CHECK(invert_phi(phi11, kX, s) == doctest::Approx(t).epsilon(1e-9));

    // independent oracle for Phi^{-1}(1) with p=q=1: t log(e+t) = 1
    const double oracle = oracles::bisect(
        [](double u) { return u * std::log(kE + u); }, 1.0, 0.0, 2.0);
    CHECK(oracle == doctest::Approx(0.79570281108236312).epsilon(1e-10));
    CHECK(invert_phi(phi11, kX, 1.0) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("invert_phi flags a non-monotone integrand") {
    // p = 1, q = -4 gives t (log(e+t))^{-4}, which dips for t roughly in
    // (2.5, 40); a target inside the dip makes the bracket search cross it
    auto bad = const_phi(1.0, -4.0);
    CHECK_THROWS_AS(invert_phi(bad, kX, 0.3), std::runtime_error);
}

TEST_CASE("round trip over a (x,t) grid") {
    const Box b = box2d(0, 0, 1, 1);
    auto phi = make_phi(fields::affine(1.5, 1.0, 0.0, b),
                        fields::sine(0.5, 0.5, 1.0, 1.0, b), 2);
    double worst = 0.0;
    for (const Point& x : box_grid(b, 8)) {
        for (double t : log_spaced(1e-3, 1e6, 16)) {
            const double back = invert_phi(phi, x, eval_phi(phi, x, t));
            worst = std::max(worst, std::abs(back - t) / std::max(1.0, t));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("sandwich constants are finite and positive") {
    const Box b = box2d(0, 0, 1, 1);
    auto phi = make_phi(fields::affine(1.5, 1.0, 0.0, b),
                        fields::sine(0.0, 0.5, 1.0, 1.0, b), 2);
    const auto sc = sandwich_constants(phi, box_grid(b, 5), log_spaced(1e-2, 1e4, 12));
    CHECK(sc.c_lower > 0.0);
    CHECK(std::isfinite(sc.c_upper));
    CHECK(sc.c_lower <= sc.c_upper);
}

TEST_CASE("monotone in t when inf p + inf q >= 1") {
    const Box b = box2d(0, 0, 1, 1);
    auto phi = make_phi(fields::constant(1.5, b), fields::constant(-0.5, b), 2);
    const auto ts = log_spaced(1e-6, 1e6, 200);
    double prev = 0.0;
    for (double t : ts) {
        const double v = eval_phi(phi, kX, t);
        CHECK(v >= prev);
        prev = v;
    }
}
