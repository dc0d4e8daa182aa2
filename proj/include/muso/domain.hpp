// Planar and interval domains given by an indicator predicate, a bounding
// box and a boundary sampler. Built-in shapes cover the test geometries:
// interval, square/rectangle, disc, polygon, power cusp, log cusp,
// rooms-and-corridor, half plane.
#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "muso/common.hpp"

namespace muso {

struct Domain {
    std::string kind;
    int dim = 2;
    Box bbox;
    std::function<bool(const Point&)> inside;
    /// count -> points on the topological boundary, roughly equidistributed.
    std::function<std::vector<Point>(int)> boundary_sampler;
    /// Corners, cusp tips and similar extremal points; density scans always
    /// probe these in addition to the sampled boundary.
    std::vector<Point> mandatory_probes;
    double perimeter_hint = 0.0;
};

namespace domains {

inline Domain interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("interval: need a < b");
    Domain d;
    d.kind = "interval";
    d.dim = 1;
    d.bbox = box1d(a, b);
    d.inside = [a, b](const Point& p) { return p.x > a && p.x < b; };
    d.boundary_sampler = [a, b](int) { return std::vector<Point>{{a, 0}, {b, 0}}; };
    d.mandatory_probes = {{a, 0}, {b, 0}};
    d.perimeter_hint = 2.0;  // two endpoints; sampling count is moot in 1D
    return d;
}

inline Domain rectangle(double ax, double ay, double bx, double by) {
    if (!(ax < bx && ay < by)) throw std::invalid_argument("rectangle: degenerate");
    Domain d;
    d.kind = "rectangle";
    d.dim = 2;
    d.bbox = box2d(ax, ay, bx, by);
    d.inside = [=](const Point& p) {
        return p.x > ax && p.x < bx && p.y > ay && p.y < by;
    };
    const double w = bx - ax, h = by - ay;
    d.perimeter_hint = 2 * (w + h);
    d.boundary_sampler = [=](int count) {
        std::vector<Point> pts;
        const double per = 2 * (w + h);
        const int n = std::max(count, 4);
        for (int i = 0; i < n; ++i) {
            double s = per * i / n;
            if (s < w)
                pts.push_back({ax + s, ay});
            else if (s < w + h)
                pts.push_back({bx, ay + (s - w)});
            else if (s < 2 * w + h)
                pts.push_back({bx - (s - w - h), by});
            else
                pts.push_back({ax, by - (s - 2 * w - h)});
        }
        return pts;
    };
    d.mandatory_probes = {{ax, ay}, {bx, ay}, {bx, by}, {ax, by}};
    return d;
}

inline Domain square(double side = 1.0) {
    Domain d = rectangle(0, 0, side, side);
    d.kind = "square";
    return d;
}

inline Domain disc(Point c, double r) {
    if (!(r > 0)) throw std::invalid_argument("disc: need r > 0");
    Domain d;
    d.kind = "disc";
    d.dim = 2;
    d.bbox = box2d(c.x - r, c.y - r, c.x + r, c.y + r);
    d.inside = [c, r](const Point& p) { return dist(p, c) < r; };
    d.perimeter_hint = 2 * M_PI * r;
    d.boundary_sampler = [c, r](int count) {
        std::vector<Point> pts;
        const int n = std::max(count, 8);
        for (int i = 0; i < n; ++i) {
            double a = 2 * M_PI * i / n;
            pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
        }
        return pts;
    };
    d.mandatory_probes = {c};
    return d;
}

/// Even-odd crossing test. Vertices form a closed ring (last edge wraps).
inline bool point_in_polygon(const std::vector<Point>& ring, const Point& p) {
    bool in = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = ring[i];
        const Point& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xcross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < xcross) in = !in;
        }
    }
    return in;
}

inline Domain polygon(std::vector<Point> ring) {
    if (ring.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
    Domain d;
    d.kind = "polygon";
    d.dim = 2;
    Point lo = ring[0], hi = ring[0];
    for (const Point& v : ring) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
    d.bbox = box2d(lo.x, lo.y, hi.x, hi.y);
    double per = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
        per += dist(ring[i], ring[(i + 1) % ring.size()]);
    d.perimeter_hint = per;
    d.inside = [ring](const Point& p) { return point_in_polygon(ring, p); };
    d.boundary_sampler = [ring, per](int count) {
        std::vector<Point> pts;
        const int n = std::max<int>(count, static_cast<int>(ring.size()));
        for (int i = 0; i < n; ++i) {
            double s = per * i / n;
            for (std::size_t k = 0; k < ring.size(); ++k) {
                const Point& a = ring[k];
                const Point& b = ring[(k + 1) % ring.size()];
                const double len = dist(a, b);
                if (s <= len || k + 1 == ring.size()) {
                    double t = len > 0 ? std::min(1.0, s / len) : 0.0;
                    pts.push_back(a + t * (b - a));
                    break;
                }
                s -= len;
            }
        }
        return pts;
    };
    d.mandatory_probes = ring;
    return d;
}

/// Vertex list CSV: one "x,y" row per vertex, closed ring, counterclockwise.
inline Domain polygon_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("polygon_from_csv: cannot open " + path);
    std::vector<Point> ring;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        Point v;
        if (row >> v.x >> v.y) ring.push_back(v);
    }
    return polygon(std::move(ring));
}

/// {0 < x < 1, |y| < x^kappa}. kappa > 1 violates the n-measure density
/// condition at the tip; kappa = 1 is a Lipschitz cone.
inline Domain power_cusp(double kappa) {
    if (!(kappa > 0)) throw std::invalid_argument("power_cusp: need kappa > 0");
    Domain d;
    d.kind = "power_cusp";
    d.dim = 2;
    d.bbox = box2d(0, -1, 1, 1);
    d.inside = [kappa](const Point& p) {
        return p.x > 0 && p.x < 1 && std::abs(p.y) < std::pow(p.x, kappa);
    };
    d.perimeter_hint = 4.5;
    // wall samples are log-graded toward the tip so density probes exist at
    // every dyadic scale
    d.boundary_sampler = [kappa](int count) {
        std::vector<Point> pts{{0, 0}};
        const int n = std::max(count / 3, 16);
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            const double x = std::pow(1e-4, 1.0 - t);
            const double yb = std::pow(x, kappa);
            pts.push_back({x, yb});
            pts.push_back({x, -yb});
        }
        for (int i = 1; i < n; ++i) {
            double y = -1.0 + 2.0 * i / n;
            if (std::abs(y) < 1.0) pts.push_back({1.0, y});
        }
        return pts;
    };
    d.mandatory_probes = {{0, 0}, {1, 1}, {1, -1}};
    return d;
}

/// {0 < x < 1/2, |y| < x / log(1/x)}; measure near the tip decays like
/// R^2 / log(1/R), the canonical log-corrected density example.
inline Domain log_cusp() {
    Domain d;
    d.kind = "log_cusp";
    d.dim = 2;
    auto half_width = [](double x) { return x / std::log(1.0 / x); };
    d.bbox = box2d(0, -1, 0.5, 1);
    d.inside = [half_width](const Point& p) {
        return p.x > 0 && p.x < 0.5 && std::abs(p.y) < half_width(p.x);
    };
    d.perimeter_hint = 2.5;
    d.boundary_sampler = [half_width](int count) {
        std::vector<Point> pts{{0, 0}};
        const int n = std::max(count / 3, 16);
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            const double x = 0.5 * std::pow(2e-4, 1.0 - t);
            const double yb = half_width(x);
            pts.push_back({x, yb});
            pts.push_back({x, -yb});
        }
        const double w = half_width(0.5);
        for (int i = 1; i < n; ++i)
            pts.push_back({0.5, -w + 2 * w * i / n});
        return pts;
    };
    d.mandatory_probes = {{0, 0}};
    return d;
}

/// Two unit rooms joined by a thin corridor.
inline Domain rooms_corridor(double corridor_width = 0.1) {
    Domain d;
    d.kind = "rooms_corridors";
    d.dim = 2;
    const double cw = corridor_width;
    const double y0 = 0.5 - cw / 2, y1 = 0.5 + cw / 2;
    d.bbox = box2d(0, 0, 2.5, 1);
    d.inside = [y0, y1](const Point& p) {
        const bool room1 = p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1;
        const bool room2 = p.x > 1.5 && p.x < 2.5 && p.y > 0 && p.y < 1;
        const bool cor = p.x >= 1 && p.x <= 1.5 && p.y > y0 && p.y < y1;
        return room1 || room2 || cor;
    };
    d.perimeter_hint = 9.0;
    d.boundary_sampler = [y0, y1](int count) {
        // walk the outline of the union
        std::vector<Point> ring = {
            {0, 0},   {1, 0},   {1, y0},  {1.5, y0}, {1.5, 0}, {2.5, 0},
            {2.5, 1}, {1.5, 1}, {1.5, y1}, {1, y1},  {1, 1},   {0, 1}};
        double per = 0;
        for (std::size_t i = 0; i < ring.size(); ++i)
            per += dist(ring[i], ring[(i + 1) % ring.size()]);
        std::vector<Point> pts;
        const int n = std::max(count, 12);
        for (int i = 0; i < n; ++i) {
            double s = per * i / n;
            for (std::size_t k = 0; k < ring.size(); ++k) {
                const Point& a = ring[k];
                const Point& b = ring[(k + 1) % ring.size()];
                const double len = dist(a, b);
                if (s <= len || k + 1 == ring.size()) {
                    double t = len > 0 ? std::min(1.0, s / len) : 0.0;
                    pts.push_back(a + t * (b - a));
                    break;
                }
                s -= len;
            }
        }
        return pts;
    };
    d.mandatory_probes = {{0, 0}, {1, y0}, {1.5, y0}, {1, y1}, {1.5, y1}, {2.5, 1}};
    return d;
}

/// Upper half plane clipped to a working box; the origin is a boundary point
/// with exact half-disc intersections, handy as an oracle geometry.
inline Domain half_plane(double extent = 2.0) {
    Domain d;
    d.kind = "half_plane";
    d.dim = 2;
    d.bbox = box2d(-extent, 0, extent, extent);
    d.inside = [extent](const Point& p) {
        return p.y > 0 && p.y < extent && p.x > -extent && p.x < extent;
    };
    d.perimeter_hint = 8 * extent;
    d.boundary_sampler = [extent](int count) {
        std::vector<Point> pts;
        const int n = std::max(count, 4);
        for (int i = 0; i < n; ++i)
            pts.push_back({-extent + 2 * extent * i / (n - 1.0), 0.0});
        return pts;
    };
    d.mandatory_probes = {{0, 0}};
    return d;
}

}  // namespace domains
}  // namespace muso
