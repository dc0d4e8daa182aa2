// The power-log integrand Phi(x,t) = t^p(x) (log(e+t))^q(x), its Sobolev
// companion Psi, and a bracketing inversion in the second argument.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "muso/common.hpp"
#include "muso/exponent_field.hpp"

namespace muso {

struct PhiFunction {
    ExponentField p;
    ExponentField q;
    int dimension = 2;

    double p_at(const Point& x) const { return p(x); }
    double q_at(const Point& x) const { return q(x); }
};

inline PhiFunction make_phi(ExponentField p, ExponentField q, int dimension) {
    validate_p_field(p);
    validate_q_field(q);
    if (dimension < 1)
        throw std::invalid_argument("make_phi: dimension must be positive");
    return PhiFunction{std::move(p), std::move(q), dimension};
}

/// t^p(x) (log(e+t))^q(x); zero at t = 0, finite for finite t.
inline double eval_phi(const PhiFunction& phi, const Point& x, double t) {
    if (t < 0) throw std::invalid_argument("eval_phi: t must be >= 0");
    if (t == 0.0) return 0.0;
    return std::pow(t, phi.p(x)) * std::pow(loge(t), phi.q(x));
}

/// n p / (n - p); defined only for 1 <= p < n.
inline double sobolev_conjugate(double p_val, int n) {
    if (!(p_val >= 1.0))
        throw std::invalid_argument("sobolev_conjugate: p must be >= 1");
    if (!(p_val < n))
        throw std::invalid_argument("sobolev_conjugate: p must be < n");
    return n * p_val / (n - p_val);
}

/// t^{p*(x)} (log(e+t))^{q(x) p*(x)/p(x)}, p* the pointwise Sobolev conjugate.
inline double eval_psi(const PhiFunction& phi, const Point& x, double t) {
    if (t < 0) throw std::invalid_argument("eval_psi: t must be >= 0");
    const double p = phi.p(x);
    const double ps = sobolev_conjugate(p, phi.dimension);
    if (t == 0.0) return 0.0;
    return std::pow(t, ps) * std::pow(loge(t), phi.q(x) * ps / p);
}

struct InvertOptions {
    double rel_tol = 1e-10;
    int max_iter = 200;
};

/// Solve Phi(x,t) = s for t by bracketing bisection. Requires Phi(x,.)
/// increasing on the bracket (holds when inf p + inf q >= 1); a non-monotone
/// sample pair during bracket growth raises with the offending t values.
inline double invert_phi(const PhiFunction& phi, const Point& x, double s,
                         InvertOptions opt = {}) {
    if (s < 0) throw std::invalid_argument("invert_phi: s must be >= 0");
    if (s == 0.0) return 0.0;
    const double p_lo = phi.p.inf_val;
    const double q_lo = phi.q.inf_val;
    double hi = std::max(1.0, std::pow(s, 1.0 / p_lo) * std::pow(2.0, std::abs(q_lo)));
    double phi_hi = eval_phi(phi, x, hi);
    int guard = 0;
    while (phi_hi < s) {
        const double next = hi * 2.0;
        const double phi_next = eval_phi(phi, x, next);
        if (phi_next < phi_hi)
            throw std::runtime_error(
                "invert_phi: Phi not increasing between t=" + std::to_string(hi) +
                " and t=" + std::to_string(next));
        hi = next;
        phi_hi = phi_next;
        if (++guard > 200)
            throw std::runtime_error("invert_phi: bracket expansion failed");
    }
    double lo = 0.0;
    const double tol = opt.rel_tol * s;
    for (int it = 0; it < opt.max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = eval_phi(phi, x, mid);
        if (std::abs(v - s) <= tol) return mid;
        if (v < s)
            lo = mid;
        else
            hi = mid;
        // the bracket itself resolves t even when s sits in a flat tail
        if (hi - lo <= opt.rel_tol * hi) break;
    }
    return 0.5 * (lo + hi);
}

/// Empirical sandwich constants for Phi^{-1}: extrema over the given grids of
/// Phi^{-1}(x,t) (log(e+t))^{q/p} / t^{1/p}. Both are finite and positive for
/// the power-log family.
struct SandwichConstants {
    double c_lower = 0.0;
    double c_upper = 0.0;
};

inline SandwichConstants sandwich_constants(const PhiFunction& phi,
                                            const std::vector<Point>& xs,
                                            const std::vector<double>& ts) {
    if (xs.empty() || ts.empty())
        throw std::invalid_argument("sandwich_constants: empty grid");
    SandwichConstants sc;
    sc.c_lower = std::numeric_limits<double>::infinity();
    for (const Point& x : xs) {
        const double p = phi.p(x), q = phi.q(x);
        for (double t : ts) {
            if (!(t > 0)) continue;
            const double inv = invert_phi(phi, x, t);
            const double ratio =
                inv * std::pow(loge(t), q / p) / std::pow(t, 1.0 / p);
            sc.c_lower = std::min(sc.c_lower, ratio);
            sc.c_upper = std::max(sc.c_upper, ratio);
        }
    }
    return sc;
}

}  // namespace muso
