// Variable exponents p(.), q(.) on a box: continuity/decay checkers and the
// infimal-convolution extension that preserves bounds and modulus.
#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muso/common.hpp"
#include "muso/quadrature.hpp"

namespace muso {

enum class ModulusKind { log_holder, loglog_holder, custom };

inline std::string to_string(ModulusKind k) {
    switch (k) {
        case ModulusKind::log_holder: return "log_holder";
        case ModulusKind::loglog_holder: return "loglog_holder";
        default: return "custom";
    }
}

/// Concave modulus of continuity rho with rho(0+) = 0. The built-in log kinds
/// are evaluated with the argument capped at 1: rho(t) = rho(min(t,1)). This
/// keeps rho nondecreasing, concave and subadditive on all of (0, inf), which
/// the extension needs; it only weakens the modulus at separations > 1.
struct Modulus {
    ModulusKind kind = ModulusKind::log_holder;
    double constant = 1.0;
    std::function<double(double)> custom_fn;

    double operator()(double t) const {
        t = std::min(t, 1.0);
        switch (kind) {
            case ModulusKind::log_holder:
                return t <= 0.0 ? 0.0 : constant / std::log(kE + 1.0 / t);
            case ModulusKind::loglog_holder:
                return t <= 0.0 ? 0.0
                                : constant / std::log(kE + std::log(kE + 1.0 / t));
            default:
                if (!custom_fn) throw std::logic_error("custom modulus without fn");
                return custom_fn(t);
        }
    }
};

struct ExponentField {
    std::function<double(const Point&)> eval;
    Box box;
    double inf_val = 1.0;
    double sup_val = 1.0;
    Modulus modulus;

    double operator()(const Point& p) const { return eval(p); }
};

/// Decay data toward infinity: limit exponent and the decay-integral base.
struct DecayData {
    double p_infinity = 2.0;  // in [1, inf]
    double nekvinda_c1 = 0.5; // strictly in (0, 1)
};

inline void validate_decay(const DecayData& d) {
    if (!(d.nekvinda_c1 > 0.0 && d.nekvinda_c1 < 1.0))
        throw std::invalid_argument("DecayData: c1 must lie strictly in (0,1)");
    if (!(d.p_infinity >= 1.0))
        throw std::invalid_argument("DecayData: p_infinity must be >= 1");
}

/// p-type exponents need 1 <= inf <= sup < inf; q-type only finiteness.
inline void validate_p_field(const ExponentField& f) {
    if (!(f.inf_val >= 1.0) || !(f.sup_val >= f.inf_val) ||
        !std::isfinite(f.sup_val))
        throw std::invalid_argument("p exponent: need 1 <= inf <= sup < inf");
}

inline void validate_q_field(const ExponentField& f) {
    if (!std::isfinite(f.inf_val) || !std::isfinite(f.sup_val) ||
        !(f.sup_val >= f.inf_val))
        throw std::invalid_argument("q exponent: need finite inf <= sup");
}

struct PairCheckReport {
    double max_ratio = 0.0;
    bool passes = true;
    Point worst_x, worst_y;
};

using PointPair = std::pair<Point, Point>;

namespace field_detail {

template <class ModulusWeight>
PairCheckReport pair_check(const ExponentField& f,
                           const std::vector<PointPair>& pairs,
                           ModulusWeight&& weight) {
    if (pairs.empty()) throw std::invalid_argument("pair check: empty pair list");
    PairCheckReport rep;
    for (const auto& [a, b] : pairs) {
        const double d = f.box.dim == 1 ? std::abs(a.x - b.x) : dist(a, b);
        if (d == 0.0)
            throw std::invalid_argument("pair check: coincident pair rejected");
        if (!f.box.contains(a, 1e-12) || !f.box.contains(b, 1e-12))
            throw std::invalid_argument("pair check: point outside field box");
        const double ratio = std::abs(f(a) - f(b)) * weight(d);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_x = a;
            rep.worst_y = b;
        }
    }
    // rounding headroom: fields built to attain the constant exactly must
    // not flip the verdict by one ulp
    const double c = f.modulus.constant;
    rep.passes = rep.max_ratio <= c + 1e-12 * std::max(1.0, c);
    return rep;
}

}  // namespace field_detail

/// max |p(x)-p(y)| * log(e + 1/|x-y|) over the pairs; passes iff it stays
/// within the field's declared constant.
inline PairCheckReport check_log_holder(const ExponentField& f,
                                        const std::vector<PointPair>& pairs) {
    return field_detail::pair_check(
        f, pairs, [](double d) { return std::log(kE + 1.0 / d); });
}

/// Iterated-log variant used for the weight exponent q.
inline PairCheckReport check_loglog_holder(const ExponentField& f,
                                           const std::vector<PointPair>& pairs) {
    return field_detail::pair_check(f, pairs, [](double d) {
        return std::log(kE + std::log(kE + 1.0 / d));
    });
}

struct NekvindaReport {
    double integral_estimate = 0.0;
    bool passes = false;
};

/// Decay integral of c1^{1/|1/p - 1/p_inf|} over the part of the box where
/// p != p_inf. Always finite on a bounded box; the value is diagnostic.
inline NekvindaReport check_nekvinda(const ExponentField& f, const DecayData& decay,
                                     int resolution_per_axis) {
    validate_p_field(f);
    validate_decay(decay);
    const double inv_pinf =
        std::isinf(decay.p_infinity) ? 0.0 : 1.0 / decay.p_infinity;
    const double c1 = decay.nekvinda_c1;
    NekvindaReport rep;
    rep.integral_estimate = box_integrate(
        [&](const Point& x) {
            const double gap = std::abs(1.0 / f(x) - inv_pinf);
            if (gap < 1e-13) return 0.0;  // integration set excludes p == p_inf
            return std::pow(c1, 1.0 / gap);
        },
        f.box, resolution_per_axis);
    rep.passes = std::isfinite(rep.integral_estimate);
    return rep;
}

/// Deterministic inclusive grid over a box, n points per axis.
inline std::vector<Point> box_grid(const Box& box, int per_axis) {
    if (per_axis < 2) throw std::invalid_argument("box_grid: need >= 2 per axis");
    std::vector<Point> pts;
    const auto xs = lin_spaced(box.lo.x, box.hi.x, per_axis);
    if (box.dim == 1) {
        for (double x : xs) pts.push_back({x, 0});
        return pts;
    }
    const auto ys = lin_spaced(box.lo.y, box.hi.y, per_axis);
    pts.reserve(xs.size() * ys.size());
    for (double y : ys)
        for (double x : xs) pts.push_back({x, y});
    return pts;
}

/// McShane extension by discrete infimal convolution:
///   p1(x) = clamp( min_y [ p(y) + rho(|x-y|) ], inf, sup ),
/// the minimum running over an inclusive sample grid of the original box.
/// Restriction to grid points is exact whenever the field satisfies its own
/// modulus, and the extension inherits the modulus with the same constant.
inline ExponentField mcshane_extend(const ExponentField& f, const Box& target_box,
                                    int samples_per_axis = 512) {
    if (target_box.dim != f.box.dim)
        throw std::invalid_argument("mcshane_extend: dimension mismatch");
    if (!target_box.contains(f.box.lo) || !target_box.contains(f.box.hi))
        throw std::invalid_argument("mcshane_extend: target box must contain field box");
    if (f.modulus.kind == ModulusKind::custom) {
        // sampled midpoint-concavity check; reject visibly non-concave moduli
        const auto ts = lin_spaced(1e-6, std::max(1.0, target_box.diameter()), 65);
        for (std::size_t i = 0; i + 2 < ts.size(); i += 2) {
            const double lhs = f.modulus(ts[i + 1]);
            const double rhs = 0.5 * (f.modulus(ts[i]) + f.modulus(ts[i + 2]));
            if (lhs + 1e-12 < rhs)
                throw std::invalid_argument(
                    "mcshane_extend: custom modulus fails concavity check");
        }
    }
    auto grid = box_grid(f.box, samples_per_axis);
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (const Point& y : grid) vals.push_back(f(y));

    const int dim = f.box.dim;
    const double lo = f.inf_val, hi = f.sup_val;
    const Modulus rho = f.modulus;
    auto shared_grid = std::make_shared<std::vector<Point>>(std::move(grid));
    auto shared_vals = std::make_shared<std::vector<double>>(std::move(vals));

    ExponentField out;
    out.box = target_box;
    out.inf_val = lo;
    out.sup_val = hi;
    out.modulus = rho;
    out.eval = [shared_grid, shared_vals, rho, lo, hi, dim](const Point& x) {
        double best = std::numeric_limits<double>::infinity();
        const auto& g = *shared_grid;
        const auto& v = *shared_vals;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double d =
                dim == 1 ? std::abs(x.x - g[i].x) : dist(x, g[i]);
            const double cand = v[i] + (d == 0.0 ? 0.0 : rho(d));
            if (cand < best) best = cand;
        }
        return std::clamp(best, lo, hi);
    };
    return out;
}

// ---------------------------------------------------------------------------
// Built-in closed forms. Bounds are exact for each form on its box.
// ---------------------------------------------------------------------------
namespace fields {

inline double max_dist_to_box(const Point& c, const Box& b) {
    const double dx = std::max(std::abs(c.x - b.lo.x), std::abs(c.x - b.hi.x));
    if (b.dim == 1) return dx;
    const double dy = std::max(std::abs(c.y - b.lo.y), std::abs(c.y - b.hi.y));
    return std::sqrt(dx * dx + dy * dy);
}

inline double min_dist_to_box(const Point& c, const Box& b) {
    const double dx = std::max({b.lo.x - c.x, 0.0, c.x - b.hi.x});
    if (b.dim == 1) return dx;
    const double dy = std::max({b.lo.y - c.y, 0.0, c.y - b.hi.y});
    return std::sqrt(dx * dx + dy * dy);
}

inline ExponentField constant(double v, const Box& box,
                              Modulus m = {ModulusKind::log_holder, 1.0, {}}) {
    return ExponentField{[v](const Point&) { return v; }, box, v, v, m};
}

inline ExponentField affine(double a, double bx, double by, const Box& box,
                            Modulus m = {ModulusKind::log_holder, 1.0, {}}) {
    auto eval = [a, bx, by, dim = box.dim](const Point& p) {
        return a + bx * p.x + (dim == 2 ? by * p.y : 0.0);
    };
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double cx : {box.lo.x, box.hi.x})
        for (double cy : {box.lo.y, box.hi.y}) {
            const double v = eval({cx, cy});
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return ExponentField{eval, box, lo, hi, m};
}

inline ExponentField sine(double base, double amp, double fx, double fy,
                          const Box& box,
                          Modulus m = {ModulusKind::log_holder, 1.0, {}}) {
    auto eval = [=, dim = box.dim](const Point& p) {
        const double sx = std::sin(2 * M_PI * fx * p.x);
        const double cy = dim == 2 ? std::cos(2 * M_PI * fy * p.y) : 1.0;
        return base + amp * sx * cy;
    };
    return ExponentField{eval, box, base - std::abs(amp), base + std::abs(amp), m};
}

/// base + min(amp, C/log(e + 1/|x - c|)); increases with distance from c.
inline ExponentField log_bump(double base, double amp, double c_mod, Point center,
                              const Box& box) {
    auto eval = [=, dim = box.dim](const Point& p) {
        const double r =
            dim == 1 ? std::abs(p.x - center.x) : dist(p, center);
        const double v = r <= 0 ? 0.0 : c_mod / std::log(kE + 1.0 / r);
        return base + std::min(amp, v);
    };
    const double rmax = max_dist_to_box(center, box);
    const double vmax =
        rmax <= 0 ? 0.0 : std::min(amp, c_mod / std::log(kE + 1.0 / rmax));
    return ExponentField{eval, box, base, base + vmax,
                         Modulus{ModulusKind::log_holder, c_mod, {}}};
}

inline ExponentField loglog_bump(double base, double amp, double c_mod,
                                 Point center, const Box& box) {
    auto eval = [=, dim = box.dim](const Point& p) {
        const double r =
            dim == 1 ? std::abs(p.x - center.x) : dist(p, center);
        const double v =
            r <= 0 ? 0.0 : c_mod / std::log(kE + std::log(kE + 1.0 / r));
        return base + std::min(amp, v);
    };
    const double rmax = max_dist_to_box(center, box);
    const double vmax =
        rmax <= 0 ? 0.0
                  : std::min(amp, c_mod / std::log(kE + std::log(kE + 1.0 / rmax)));
    return ExponentField{eval, box, base, base + vmax,
                         Modulus{ModulusKind::loglog_holder, c_mod, {}}};
}

/// base + sqrt(|x - c|): Hoelder-1/2, so log-Hoelder only with a large
/// constant; useful as a near-miss test field.
inline ExponentField sqrt_bump(double base, Point center, const Box& box,
                               Modulus m = {ModulusKind::log_holder, 2.0, {}}) {
    auto eval = [=, dim = box.dim](const Point& p) {
        const double r =
            dim == 1 ? std::abs(p.x - center.x) : dist(p, center);
        return base + std::sqrt(r);
    };
    const double rmax = max_dist_to_box(center, box);
    return ExponentField{eval, box, base, base + std::sqrt(rmax), m};
}

inline ExponentField gaussian(double base, double amp, double sigma, Point center,
                              const Box& box,
                              Modulus m = {ModulusKind::log_holder, 1.0, {}}) {
    auto eval = [=, dim = box.dim](const Point& p) {
        const double r =
            dim == 1 ? std::abs(p.x - center.x) : dist(p, center);
        return base + amp * std::exp(-r * r / (2 * sigma * sigma));
    };
    const double rmin = min_dist_to_box(center, box);
    const double rmax = max_dist_to_box(center, box);
    const double vnear = amp * std::exp(-rmin * rmin / (2 * sigma * sigma));
    const double vfar = amp * std::exp(-rmax * rmax / (2 * sigma * sigma));
    const double lo = base + std::min(vnear, vfar);
    const double hi = base + std::max(vnear, vfar);
    return ExponentField{eval, box, lo, hi, m};
}

/// Grid file: rows "x,value" (1D) or "x,y,value" (2D) on a full tensor grid;
/// evaluation interpolates bilinearly and clamps to the data hull.
inline ExponentField from_grid_csv(const std::string& path,
                                   Modulus m = {ModulusKind::log_holder, 1.0, {}}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("from_grid_csv: cannot open " + path);
    std::vector<double> xs, ys, vs;
    int cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::vector<double> nums;
        double v;
        while (row >> v) nums.push_back(v);
        if (nums.empty()) continue;
        if (cols == 0) cols = static_cast<int>(nums.size());
        if (static_cast<int>(nums.size()) != cols)
            throw std::runtime_error("from_grid_csv: ragged row in " + path);
        xs.push_back(nums[0]);
        if (cols == 3) ys.push_back(nums[1]);
        vs.push_back(nums.back());
    }
    if (cols != 2 && cols != 3)
        throw std::runtime_error("from_grid_csv: need 2 or 3 columns");
    if (vs.size() < 2) throw std::runtime_error("from_grid_csv: too few samples");

    auto unique_sorted = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                v.end());
        return v;
    };
    const auto ux = unique_sorted(xs);
    const auto uy = cols == 3 ? unique_sorted(ys) : std::vector<double>{0.0};
    const std::size_t nx = ux.size(), ny = uy.size();
    if (nx * ny != vs.size())
        throw std::runtime_error("from_grid_csv: samples do not form a tensor grid");

    auto index_of = [](const std::vector<double>& u, double x) {
        auto it = std::lower_bound(u.begin(), u.end(), x - 1e-12);
        if (it == u.end() || std::abs(*it - x) > 1e-9)
            throw std::runtime_error("from_grid_csv: sample off the tensor grid");
        return static_cast<std::size_t>(it - u.begin());
    };
    std::vector<double> table(nx * ny, 0.0);
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const std::size_t i = index_of(ux, xs[k]);
        const std::size_t j = cols == 3 ? index_of(uy, ys[k]) : 0;
        table[j * nx + i] = vs[k];
    }
    double lo = *std::min_element(vs.begin(), vs.end());
    double hi = *std::max_element(vs.begin(), vs.end());

    const int dim = cols == 3 ? 2 : 1;
    Box box = dim == 1 ? box1d(ux.front(), ux.back())
                       : box2d(ux.front(), uy.front(), ux.back(), uy.back());

    auto cell = [](const std::vector<double>& u, double x) {
        // clamped bracketing interval and interpolation weight
        if (x <= u.front()) return std::pair<std::size_t, double>{0, 0.0};
        if (x >= u.back())
            return std::pair<std::size_t, double>{u.size() - 2, 1.0};
        auto it = std::upper_bound(u.begin(), u.end(), x);
        std::size_t i = static_cast<std::size_t>(it - u.begin()) - 1;
        i = std::min(i, u.size() - 2);
        return std::pair<std::size_t, double>{i, (x - u[i]) / (u[i + 1] - u[i])};
    };
    auto eval = [ux, uy, table, nx, dim, cell](const Point& p) {
        const auto [i, tx] = cell(ux, p.x);
        if (dim == 1)
            return (1 - tx) * table[i] + tx * table[i + 1];
        const auto [j, ty] = cell(uy, p.y);
        const double v00 = table[j * nx + i], v10 = table[j * nx + i + 1];
        const double v01 = table[(j + 1) * nx + i], v11 = table[(j + 1) * nx + i + 1];
        return (1 - ty) * ((1 - tx) * v00 + tx * v10) +
               ty * ((1 - tx) * v01 + tx * v11);
    };
    return ExponentField{eval, box, lo, hi, m};
}

}  // namespace fields
}  // namespace muso
