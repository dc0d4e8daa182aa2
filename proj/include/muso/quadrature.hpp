// Midpoint quadrature over irregular regions with recursive refinement of
// boundary-cut cells, plus a seeded Monte Carlo estimator used as an
// independent cross-check for measures.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "muso/common.hpp"
#include "muso/domain.hpp"

namespace muso {

enum class QuadScheme { midpoint, boundary_refined_midpoint, monte_carlo };

struct QuadratureRule {
    QuadScheme scheme = QuadScheme::boundary_refined_midpoint;
    /// Cells per axis for the midpoint schemes; sample count for Monte Carlo.
    int resolution = 64;
    std::uint64_t seed = 1;
    /// Cells cut by the boundary subdivide up to this depth.
    int refine_depth = 6;
    /// k x k subsample grid deciding the inside fraction of a depth-capped leaf.
    int leaf_samples = 4;
};

struct QuadNode {
    Point p;
    double w = 0.0;
};

using Indicator = std::function<bool(const Point&)>;

namespace quad_detail {

// 0 = all samples outside, 1 = all inside, 2 = mixed.
inline int classify(const Indicator& ind, const Box& cell) {
    int in = 0, total = 0;
    if (cell.dim == 1) {
        const double xs[3] = {cell.lo.x, 0.5 * (cell.lo.x + cell.hi.x), cell.hi.x};
        for (double x : xs) {
            ++total;
            if (ind({x, 0})) ++in;
        }
    } else {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ++total;
                Point p{cell.lo.x + 0.5 * i * cell.width(),
                        cell.lo.y + 0.5 * j * cell.height()};
                if (ind(p)) ++in;
            }
    }
    if (in == 0) return 0;
    if (in == total) return 1;
    return 2;
}

inline double leaf_fraction(const Indicator& ind, const Box& cell, int k) {
    int in = 0, total = 0;
    if (cell.dim == 1) {
        for (int i = 0; i < k; ++i) {
            ++total;
            double x = cell.lo.x + (i + 0.5) * cell.width() / k;
            if (ind({x, 0})) ++in;
        }
    } else {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                ++total;
                Point p{cell.lo.x + (i + 0.5) * cell.width() / k,
                        cell.lo.y + (j + 0.5) * cell.height() / k};
                if (ind(p)) ++in;
            }
    }
    return static_cast<double>(in) / total;
}

inline void split(const Box& cell, std::vector<Box>& out) {
    out.clear();
    const Point m = cell.center();
    if (cell.dim == 1) {
        out.push_back(Box{cell.lo, {m.x, 0}, 1});
        out.push_back(Box{{m.x, 0}, cell.hi, 1});
    } else {
        out.push_back(Box{cell.lo, m, 2});
        out.push_back(Box{{m.x, cell.lo.y}, {cell.hi.x, m.y}, 2});
        out.push_back(Box{{cell.lo.x, m.y}, {m.x, cell.hi.y}, 2});
        out.push_back(Box{m, cell.hi, 2});
    }
}

inline double refined_cell_measure(const Indicator& ind, const Box& cell,
                                   int depth_left, int leaf_k) {
    const int c = classify(ind, cell);
    if (c == 0) return 0.0;
    if (c == 1) return cell.volume();
    if (depth_left == 0) return cell.volume() * leaf_fraction(ind, cell, leaf_k);
    std::vector<Box> kids;
    split(cell, kids);
    StableSum s;
    for (const Box& k : kids)
        s.add(refined_cell_measure(ind, k, depth_left - 1, leaf_k));
    return s.value();
}

inline Box cell_at(const Box& grid, int res, int i, int j) {
    const double hx = grid.width() / res;
    if (grid.dim == 1)
        return Box{{grid.lo.x + i * hx, 0}, {grid.lo.x + (i + 1) * hx, 0}, 1};
    const double hy = grid.height() / res;
    return Box{{grid.lo.x + i * hx, grid.lo.y + j * hy},
               {grid.lo.x + (i + 1) * hx, grid.lo.y + (j + 1) * hy}, 2};
}

}  // namespace quad_detail

/// Measure of {ind == true} within grid_box, on a res^dim grid with
/// boundary refinement. Deterministic for fixed inputs.
inline double region_measure(const Indicator& ind, const Box& grid_box,
                             const QuadratureRule& rule) {
    if (rule.resolution <= 0)
        throw std::invalid_argument("region_measure: resolution must be positive");
    const int res = rule.resolution;
    const int depth =
        rule.scheme == QuadScheme::boundary_refined_midpoint ? rule.refine_depth : 0;
    const int cols = grid_box.dim == 1 ? 1 : res;
    const std::int64_t total = static_cast<std::int64_t>(res) * cols;
    return parallel_sum(total, [&](std::int64_t idx) {
        const int i = static_cast<int>(idx % res);
        const int j = static_cast<int>(idx / res);
        const Box cell = quad_detail::cell_at(grid_box, res, i, j);
        if (depth == 0) {
            // plain midpoint: count the cell if its center is inside
            return ind(cell.center()) ? cell.volume() : 0.0;
        }
        return quad_detail::refined_cell_measure(ind, cell, depth, rule.leaf_samples);
    });
}

struct McEstimate {
    double value = 0.0;
    double sigma = 0.0;
};

/// Seeded uniform sampling over grid_box; sigma is the binomial standard
/// error scaled to the box volume.
inline McEstimate monte_carlo_measure(const Indicator& ind, const Box& grid_box,
                                      std::int64_t samples, std::uint64_t seed) {
    if (samples <= 0)
        throw std::invalid_argument("monte_carlo_measure: need samples > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(grid_box.lo.x, grid_box.hi.x);
    std::uniform_real_distribution<double> uy(grid_box.lo.y, grid_box.hi.y);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
        Point p{ux(rng), grid_box.dim == 2 ? uy(rng) : 0.0};
        if (ind(p)) ++hits;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    const double vol = grid_box.volume();
    McEstimate est;
    est.value = frac * vol;
    est.sigma = vol * std::sqrt(std::max(frac * (1.0 - frac), 0.0) /
                                static_cast<double>(samples));
    return est;
}

inline Box ball_box(const Domain& dom, Point x, double R) {
    if (dom.dim == 1) return box1d(x.x - R, x.x + R);
    return box2d(x.x - R, x.y - R, x.x + R, x.y + R);
}

inline Indicator ball_indicator(const Domain& dom, Point x, double R) {
    auto inside = dom.inside;
    if (dom.dim == 1)
        return [inside, x, R](const Point& p) {
            return std::abs(p.x - x.x) < R && inside(p);
        };
    return [inside, x, R](const Point& p) { return dist(p, x) < R && inside(p); };
}

/// |B_R(x) ∩ Ω|. The grid covers the ball's own bounding box, so the relative
/// discretization bias is scale-invariant for cone-like geometries.
inline double ball_intersection_measure(const Domain& dom, Point x, double R,
                                        const QuadratureRule& rule) {
    if (!(R > 0))
        throw std::invalid_argument("ball_intersection_measure: need R > 0");
    if (rule.scheme == QuadScheme::monte_carlo)
        return monte_carlo_measure(ball_indicator(dom, x, R), ball_box(dom, x, R),
                                   rule.resolution, rule.seed)
            .value;
    return region_measure(ball_indicator(dom, x, R), ball_box(dom, x, R), rule);
}

/// Regular-grid quadrature nodes of Ω: cell centers with weights. Midpoint
/// gives full-cell weights for center-inside cells; the refined scheme keeps
/// every cell that meets Omega with weight |cell ∩ Ω|.
inline std::vector<QuadNode> region_nodes(const Domain& dom,
                                          const QuadratureRule& rule) {
    if (rule.resolution <= 0)
        throw std::invalid_argument("region_nodes: resolution must be positive");
    const int res = rule.resolution;
    const int cols = dom.bbox.dim == 1 ? 1 : res;
    std::vector<QuadNode> nodes;
    nodes.reserve(static_cast<std::size_t>(res) * cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < res; ++i) {
            const Box cell = quad_detail::cell_at(dom.bbox, res, i, j);
            double w = 0.0;
            if (rule.scheme == QuadScheme::boundary_refined_midpoint) {
                w = quad_detail::refined_cell_measure(dom.inside, cell,
                                                      rule.refine_depth,
                                                      rule.leaf_samples);
            } else {
                w = dom.inside(cell.center()) ? cell.volume() : 0.0;
            }
            if (w > 0.0) nodes.push_back({cell.center(), w});
        }
    }
    return nodes;
}

/// Plain midpoint integral of fn over a box (no indicator).
inline double box_integrate(const std::function<double(const Point&)>& fn,
                            const Box& box, int res_per_axis) {
    if (res_per_axis <= 0)
        throw std::invalid_argument("box_integrate: resolution must be positive");
    const int res = res_per_axis;
    const int cols = box.dim == 1 ? 1 : res;
    const std::int64_t total = static_cast<std::int64_t>(res) * cols;
    return parallel_sum(total, [&](std::int64_t idx) {
        const int i = static_cast<int>(idx % res);
        const int j = static_cast<int>(idx / res);
        const Box cell = quad_detail::cell_at(box, res, i, j);
        return fn(cell.center()) * cell.volume();
    });
}

}  // namespace muso
