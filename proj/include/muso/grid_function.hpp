// Scalar fields sampled on a regular grid restricted to a domain, with
// optional analytic or finite-difference gradients and CSV import.
#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "muso/common.hpp"
#include "muso/domain.hpp"
#include "muso/quadrature.hpp"

namespace muso {

struct GridFunction {
    Domain domain;
    int resolution = 0;     // base cells per axis over domain.bbox
    double cell_measure = 0.0;
    std::vector<Point> points;    // node = cell center
    std::vector<double> values;
    std::vector<double> weights;  // integration weight per node
    std::vector<Point> gradients;
    bool has_gradient = false;

    // (i,j) -> node index, -1 where the grid has no node; used for stencils
    int nx = 0, ny = 0;
    std::vector<int> index;

    int node_at(int i, int j) const {
        if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
        return index[static_cast<std::size_t>(j) * nx + i];
    }
};

using ScalarFn = std::function<double(const Point&)>;
using VectorFn = std::function<Point(const Point&)>;

/// Sample fn at the cell centers of a res^dim grid over the domain box.
/// Midpoint keeps center-inside cells at full weight; the refined scheme
/// keeps them with weight |cell ∩ Ω| instead.
inline GridFunction sample_function(const Domain& dom, const ScalarFn& fn,
                                    const QuadratureRule& rule,
                                    std::optional<VectorFn> grad = std::nullopt) {
    if (rule.resolution <= 0)
        throw std::invalid_argument("sample_function: resolution must be positive");
    GridFunction f;
    f.domain = dom;
    f.resolution = rule.resolution;
    f.nx = rule.resolution;
    f.ny = dom.dim == 1 ? 1 : rule.resolution;
    f.index.assign(static_cast<std::size_t>(f.nx) * f.ny, -1);
    const double hx = dom.bbox.width() / f.nx;
    const double hy = dom.dim == 2 ? dom.bbox.height() / f.ny : 1.0;
    f.cell_measure = dom.dim == 1 ? hx : hx * hy;
    for (int j = 0; j < f.ny; ++j) {
        for (int i = 0; i < f.nx; ++i) {
            const Box cell = quad_detail::cell_at(dom.bbox, f.nx, i, j);
            const Point c = cell.center();
            if (!dom.inside(c)) continue;
            double w = f.cell_measure;
            if (rule.scheme == QuadScheme::boundary_refined_midpoint)
                w = quad_detail::refined_cell_measure(dom.inside, cell,
                                                      rule.refine_depth,
                                                      rule.leaf_samples);
            if (w <= 0.0) continue;
            f.index[static_cast<std::size_t>(j) * f.nx + i] =
                static_cast<int>(f.points.size());
            f.points.push_back(c);
            const double v = fn(c);
            if (!std::isfinite(v))
                throw std::runtime_error("sample_function: non-finite sample");
            f.values.push_back(v);
            f.weights.push_back(w);
            if (grad) f.gradients.push_back((*grad)(c));
        }
    }
    f.has_gradient = grad.has_value();
    if (f.points.empty())
        throw std::runtime_error("sample_function: no grid node lies inside the domain");
    return f;
}

/// Indicator of a subset as a grid function on the ambient domain.
inline GridFunction sample_indicator(const Domain& dom, const Indicator& subset,
                                     const QuadratureRule& rule) {
    return sample_function(
        dom, [&subset](const Point& p) { return subset(p) ? 1.0 : 0.0; }, rule);
}

/// Replace/attach gradients by finite differences on the stored grid:
/// central where both neighbors exist, one-sided at the boundary, zero for
/// isolated nodes. First-order accurate near the boundary.
inline void finite_difference_gradient(GridFunction& f) {
    const double hx = f.domain.bbox.width() / f.nx;
    const double hy = f.domain.dim == 2 ? f.domain.bbox.height() / f.ny : 1.0;
    f.gradients.assign(f.points.size(), Point{});
    for (int j = 0; j < f.ny; ++j) {
        for (int i = 0; i < f.nx; ++i) {
            const int k = f.node_at(i, j);
            if (k < 0) continue;
            const int xm = f.node_at(i - 1, j), xp = f.node_at(i + 1, j);
            double gx = 0.0;
            if (xm >= 0 && xp >= 0)
                gx = (f.values[xp] - f.values[xm]) / (2 * hx);
            else if (xp >= 0)
                gx = (f.values[xp] - f.values[k]) / hx;
            else if (xm >= 0)
                gx = (f.values[k] - f.values[xm]) / hx;
            double gy = 0.0;
            if (f.domain.dim == 2) {
                const int ym = f.node_at(i, j - 1), yp = f.node_at(i, j + 1);
                if (ym >= 0 && yp >= 0)
                    gy = (f.values[yp] - f.values[ym]) / (2 * hy);
                else if (yp >= 0)
                    gy = (f.values[yp] - f.values[k]) / hy;
                else if (ym >= 0)
                    gy = (f.values[k] - f.values[ym]) / hy;
            }
            f.gradients[static_cast<std::size_t>(k)] = {gx, gy};
        }
    }
    f.has_gradient = true;
}

/// CSV rows "x,value[,gx]" (dim 1) or "x,y,value[,gx,gy]" (dim 2), sampled on
/// a regular grid. Weights are uniform (one cell per sample).
inline GridFunction grid_function_from_csv(const std::string& path, int dim) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("grid_function_from_csv: dim must be 1 or 2");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("grid_function_from_csv: cannot open " + path);
    std::vector<Point> pts;
    std::vector<double> vals;
    std::vector<Point> grads;
    bool any_grad = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::vector<double> nums;
        double v;
        while (row >> v) nums.push_back(v);
        if (nums.empty()) continue;
        const std::size_t base = dim == 1 ? 2 : 3;
        if (nums.size() != base && nums.size() != base + dim)
            throw std::runtime_error("grid_function_from_csv: bad column count");
        Point p{nums[0], dim == 2 ? nums[1] : 0.0};
        pts.push_back(p);
        vals.push_back(nums[base - 1]);
        if (nums.size() == base + dim) {
            any_grad = true;
            grads.push_back({nums[base], dim == 2 ? nums[base + 1] : 0.0});
        } else {
            grads.push_back({});
        }
    }
    if (pts.size() < 2)
        throw std::runtime_error("grid_function_from_csv: too few samples");

    Point lo = pts[0], hi = pts[0];
    for (const Point& p : pts) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    // infer spacing from the sorted distinct x coordinates
    std::vector<double> xs;
    for (const Point& p : pts) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    double h = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = xs[i] - xs[i - 1];
        if (d > 1e-12) {
            h = d;
            break;
        }
    }
    if (h <= 0.0) throw std::runtime_error("grid_function_from_csv: degenerate grid");

    GridFunction f;
    f.domain = dim == 1 ? domains::interval(lo.x - h / 2, hi.x + h / 2)
                        : domains::rectangle(lo.x - h / 2, lo.y - h / 2,
                                             hi.x + h / 2, hi.y + h / 2);
    f.resolution = static_cast<int>(std::lround((hi.x - lo.x) / h)) + 1;
    f.cell_measure = dim == 1 ? h : h * h;
    f.points = std::move(pts);
    f.values = std::move(vals);
    f.weights.assign(f.points.size(), f.cell_measure);
    f.has_gradient = any_grad;
    if (any_grad) f.gradients = std::move(grads);
    // stencil index map
    f.nx = f.resolution;
    f.ny = dim == 1 ? 1 : f.resolution;
    f.index.assign(static_cast<std::size_t>(f.nx) * f.ny, -1);
    for (std::size_t k = 0; k < f.points.size(); ++k) {
        const int i = static_cast<int>(std::lround((f.points[k].x - lo.x) / h));
        const int j =
            dim == 2 ? static_cast<int>(std::lround((f.points[k].y - lo.y) / h)) : 0;
        if (i >= 0 && i < f.nx && j >= 0 && j < f.ny)
            f.index[static_cast<std::size_t>(j) * f.nx + i] = static_cast<int>(k);
    }
    return f;
}

}  // namespace muso
