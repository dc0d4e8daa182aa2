// Sampled verification of the structural conditions (A0), (A1), (A2),
// (aInc)_1 and (Dec)_{p+ + q+} for the power-log integrand. Checkers falsify
// on grids; they report worst-case ratios and the witnesses attaining them.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "muso/common.hpp"
#include "muso/phi.hpp"

namespace muso {

enum class PhiCondition { A0, A1, A2, aInc1, Dec };

inline std::string to_string(PhiCondition c) {
    switch (c) {
        case PhiCondition::A0: return "A0";
        case PhiCondition::A1: return "A1";
        case PhiCondition::A2: return "A2";
        case PhiCondition::aInc1: return "aInc1";
        default: return "Dec";
    }
}

struct ConditionWitness {
    Point x;
    Point y;          // secondary point, A1 only
    double t = 0.0;   // scale at the extremum
    double t2 = 0.0;  // second scale for pairwise scans
    double value = 0.0;
};

struct ConditionReport {
    PhiCondition condition = PhiCondition::A0;
    double beta_or_bound = 0.0;
    bool passes = false;
    std::vector<ConditionWitness> witnesses;
    /// A1 only: the lower bound on beta implied by the continuity constants.
    double proof_bound = 0.0;
};

/// (A0): beta* = min over samples of min(Phi^{-1}(x,1), 1/Phi^{-1}(x,1)).
inline ConditionReport check_A0(const PhiFunction& phi,
                                const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("check_A0: empty sample set");
    ConditionReport rep;
    rep.condition = PhiCondition::A0;
    rep.beta_or_bound = std::numeric_limits<double>::infinity();
    for (const Point& x : points) {
        const double v = invert_phi(phi, x, 1.0);
        const double b = std::min(v, 1.0 / v);
        if (b < rep.beta_or_bound) {
            rep.beta_or_bound = b;
            rep.witnesses = {{x, {}, 1.0, 0.0, v}};
        }
    }
    rep.passes = rep.beta_or_bound > 0.0;
    return rep;
}

struct Ball {
    Point center;
    double radius = 0.0;
};

inline double ball_volume(const Ball& b, int dim) {
    return dim == 1 ? 2.0 * b.radius : M_PI * b.radius * b.radius;
}

struct A1Options {
    int t_samples = 64;
    int points_per_axis = 5;
};

/// (A1): beta* = min over balls B, t in [1, 1/|B|] and x,y in B of
/// Phi^{-1}(y,t) / Phi^{-1}(x,t). Alongside beta* the report carries the
/// bound obtained from the continuity constants of p and q.
inline ConditionReport check_A1(const PhiFunction& phi, const std::vector<Ball>& balls,
                                A1Options opt = {}) {
    if (balls.empty()) throw std::invalid_argument("check_A1: no balls given");
    ConditionReport rep;
    rep.condition = PhiCondition::A1;
    rep.beta_or_bound = std::numeric_limits<double>::infinity();
    double c_upper = 0.0;  // empirical sandwich constant, feeds proof_bound
    for (const Ball& ball : balls) {
        const double vol = ball_volume(ball, phi.dimension);
        if (vol > 1.0)
            throw std::invalid_argument("check_A1: ball volume exceeds 1");
        std::vector<Point> pts;
        const auto xs = lin_spaced(ball.center.x - ball.radius,
                                   ball.center.x + ball.radius, opt.points_per_axis);
        if (phi.dimension == 1) {
            for (double x : xs)
                if (phi.p.box.contains({x, 0})) pts.push_back({x, 0});
        } else {
            const auto ys = lin_spaced(ball.center.y - ball.radius,
                                       ball.center.y + ball.radius,
                                       opt.points_per_axis);
            for (double y : ys)
                for (double x : xs) {
                    Point p{x, y};
                    if (dist(p, ball.center) <= ball.radius &&
                        phi.p.box.contains(p))
                        pts.push_back(p);
                }
        }
        if (pts.size() < 2) continue;
        for (double t : log_spaced(1.0, 1.0 / vol, opt.t_samples)) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            Point arg_lo, arg_hi;
            for (const Point& x : pts) {
                const double inv = invert_phi(phi, x, t);
                const double sandwich = inv * std::pow(loge(t), phi.q(x) / phi.p(x)) /
                                        std::pow(t, 1.0 / phi.p(x));
                c_upper = std::max(c_upper, sandwich);
                if (inv < lo) {
                    lo = inv;
                    arg_lo = x;
                }
                if (inv > hi) {
                    hi = inv;
                    arg_hi = x;
                }
            }
            const double ratio = lo / hi;
            if (ratio < rep.beta_or_bound) {
                rep.beta_or_bound = ratio;
                rep.witnesses = {{arg_hi, arg_lo, t, 0.0, ratio}};
            }
        }
    }
    if (!std::isfinite(rep.beta_or_bound))
        throw std::invalid_argument("check_A1: no usable sample points in any ball");
    const double n = phi.dimension;
    const double c = phi.p.modulus.constant;
    const double c0 = phi.q.modulus.constant;
    const double lle = std::log(std::log(kE + 1.0));
    rep.proof_bound =
        1.0 / (std::max(c_upper, 1.0) * std::exp(c * n) *
               std::exp(c0 + c0 * std::log(n) / lle));
    rep.passes = rep.beta_or_bound > 0.0;
    return rep;
}

enum class SignCase { q_nonneg, q_negative, q_mixed };

inline std::string to_string(SignCase c) {
    switch (c) {
        case SignCase::q_nonneg: return "q_nonneg";
        case SignCase::q_negative: return "q_negative";
        default: return "q_mixed";
    }
}

inline SignCase detect_sign_case(const PhiFunction& phi,
                                 const std::vector<Point>& points) {
    bool has_neg = false, has_pos = false;
    for (const Point& x : points) {
        const double q = phi.q(x);
        if (q < 0.0)
            has_neg = true;
        else
            has_pos = true;
    }
    if (!has_neg) return SignCase::q_nonneg;
    if (!has_pos) return SignCase::q_negative;
    return SignCase::q_mixed;
}

struct A2Options {
    double threshold_s = 1.0;
    int t_samples = 64;
    double tol = 1e-10;
};

/// (A2), verified through the two transfer inequalities against
/// phi_inf(t) = t^{p_inf}: Phi(x, beta t) <= phi_inf(t) + h(x) and
/// phi_inf(beta t) <= Phi(x, t) + h(x) for t <= s, with beta and h chosen by
/// the sign pattern of q.
inline ConditionReport check_A2(const PhiFunction& phi, const DecayData& decay,
                                const std::vector<Point>& points,
                                A2Options opt = {}) {
    if (points.empty()) throw std::invalid_argument("check_A2: empty sample set");
    validate_decay(decay);
    if (std::isinf(decay.p_infinity))
        throw std::invalid_argument("check_A2: p_infinity must be finite here");
    const double c1 = decay.nekvinda_c1;
    const double p_inf = decay.p_infinity;
    const double L1 = std::log(kE + 1.0);
    const double q_hi = phi.q.sup_val;
    const double q_lo = phi.q.inf_val;

    const SignCase sc = detect_sign_case(phi, points);
    double bound = 0.0;
    switch (sc) {
        case SignCase::q_nonneg: bound = c1 * std::pow(L1, -q_hi); break;
        case SignCase::q_negative: bound = c1 * std::pow(L1, q_lo); break;
        case SignCase::q_mixed: bound = c1 * std::pow(L1, q_lo - q_hi); break;
    }
    const double beta = 0.99 * std::min(1.0, bound);

    auto h_of = [&](const Point& x) {
        const double gap = std::abs(1.0 / phi.p(x) - 1.0 / p_inf);
        if (gap < 1e-13) return 0.0;
        if (sc == SignCase::q_nonneg)
            return std::pow(beta * std::pow(L1, q_hi), 1.0 / gap);
        return std::pow(c1, 1.0 / gap);
    };

    ConditionReport rep;
    rep.condition = PhiCondition::A2;
    rep.beta_or_bound = beta;
    double worst = -std::numeric_limits<double>::infinity();
    const auto ts = log_spaced(1e-8, opt.threshold_s, opt.t_samples);
    for (const Point& x : points) {
        const double h = h_of(x);
        for (double t : ts) {
            const double m1 = eval_phi(phi, x, beta * t) -
                              (std::pow(t, p_inf) + h);
            const double m2 = std::pow(beta * t, p_inf) -
                              (eval_phi(phi, x, t) + h);
            const double m = std::max(m1, m2);
            if (m > worst) {
                worst = m;
                rep.witnesses = {{x, {}, t, 0.0, m}};
            }
        }
    }
    rep.passes = worst <= opt.tol;
    return rep;
}

/// (Dec)_{p+ + q+}: t -> Phi(x,t)/t^{p+ + q+} must be nonincreasing along the
/// grid; reports the worst relative adjacent-pair increase.
inline ConditionReport check_dec(const PhiFunction& phi,
                                 const std::vector<double>& t_grid,
                                 const std::vector<Point>& points) {
    if (t_grid.size() < 2 || points.empty())
        throw std::invalid_argument("check_dec: need a t grid and sample points");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] <= 0.0)
            throw std::invalid_argument("check_dec: grid must exclude 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("check_dec: grid must be strictly increasing");
    }
    const double k = phi.p.sup_val + phi.q.sup_val;
    ConditionReport rep;
    rep.condition = PhiCondition::Dec;
    double worst = 0.0;
    for (const Point& x : points) {
        const double p = phi.p(x), q = phi.q(x);
        double prev = std::pow(t_grid[0], p - k) * std::pow(loge(t_grid[0]), q);
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            const double cur =
                std::pow(t_grid[i], p - k) * std::pow(loge(t_grid[i]), q);
            const double viol = (cur - prev) / std::max(std::abs(prev), 1e-300);
            if (viol > worst) {
                worst = viol;
                rep.witnesses = {{x, {}, t_grid[i - 1], t_grid[i], cur / prev}};
            }
            prev = cur;
        }
    }
    rep.beta_or_bound = worst;
    rep.passes = worst <= 1e-12;
    return rep;
}

/// (aInc)_1: a* = sup over s < t of [Phi(x,s)/s] / [Phi(x,t)/t]; at most 1
/// (up to rounding) whenever inf p + inf q >= 1.
inline ConditionReport check_ainc1(const PhiFunction& phi,
                                   const std::vector<double>& t_grid,
                                   const std::vector<Point>& points) {
    if (t_grid.size() < 2 || points.empty())
        throw std::invalid_argument("check_ainc1: need a t grid and sample points");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] <= 0.0)
            throw std::invalid_argument("check_ainc1: grid must exclude 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("check_ainc1: grid must be strictly increasing");
    }
    ConditionReport rep;
    rep.condition = PhiCondition::aInc1;
    double a_star = 0.0;
    for (const Point& x : points) {
        const double p = phi.p(x), q = phi.q(x);
        auto g = [&](double t) {
            return std::pow(t, p - 1.0) * std::pow(loge(t), q);
        };
        double pref_max = g(t_grid[0]);
        double pref_arg = t_grid[0];
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            const double cur = g(t_grid[i]);
            const double ratio = pref_max / cur;
            if (ratio > a_star) {
                a_star = ratio;
                rep.witnesses = {{x, {}, pref_arg, t_grid[i], ratio}};
            }
            if (cur > pref_max) {
                pref_max = cur;
                pref_arg = t_grid[i];
            }
        }
    }
    rep.beta_or_bound = a_star;
    rep.passes = a_star <= 1.0 + 1e-10;
    return rep;
}

/// Default scan grids: 64 log-spaced t values and 32 (1D) / 32x32 (2D)
/// spatial points over the exponent box.
inline std::vector<double> default_t_grid(double lo = 1e-3, double hi = 1e3,
                                          int count = 64) {
    return log_spaced(lo, hi, count);
}

inline std::vector<Point> default_space_grid(const Box& box, int per_axis = 32) {
    return box_grid(box, per_axis);
}

}  // namespace muso
