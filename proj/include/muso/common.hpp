// Shared geometric primitives and numeric helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace muso {

inline constexpr double kE = 2.718281828459045235360287471352662498;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

/// Axis-aligned box; dim==1 boxes ignore the y coordinate entirely.
struct Box {
    Point lo;
    Point hi;
    int dim = 2;

    bool contains(Point p, double tol = 0.0) const {
        if (p.x < lo.x - tol || p.x > hi.x + tol) return false;
        if (dim == 2 && (p.y < lo.y - tol || p.y > hi.y + tol)) return false;
        return true;
    }
    double width() const { return hi.x - lo.x; }
    double height() const { return dim == 2 ? hi.y - lo.y : 0.0; }
    double volume() const { return dim == 1 ? width() : width() * height(); }
    double diameter() const {
        return dim == 1 ? width() : norm(hi - lo);
    }
    Point center() const { return 0.5 * (lo + hi); }
};

inline Box box1d(double a, double b) { return Box{{a, 0.0}, {b, 0.0}, 1}; }
inline Box box2d(double ax, double ay, double bx, double by) {
    return Box{{ax, ay}, {bx, by}, 2};
}

/// log(e + t), the weight base used throughout; >= 1 for t >= 0.
inline double loge(double t) { return std::log(kE + t); }

/// Neumaier compensated accumulator. Summation order is the caller's
/// responsibility; with a fixed order results are reproducible bit-for-bit.
class StableSum {
  public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace runtime {
/// Worker count for chunked scans. 1 = serial. Results are independent of
/// this setting: chunk boundaries are fixed and chunks combine in index order.
inline int& thread_count() {
    static int n = 1;
    return n;
}
}  // namespace runtime

/// Deterministic parallel sum of fn(i) for i in [0, n). Fixed chunk grain,
/// per-chunk compensated sums combined in chunk order, so the result does not
/// depend on the number of workers.
template <class Fn>
double parallel_sum(std::int64_t n, Fn&& fn, std::int64_t grain = 4096) {
    if (n <= 0) return 0.0;
    const std::int64_t chunks = (n + grain - 1) / grain;
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
    auto run_chunk = [&](std::int64_t c) {
        StableSum s;
        const std::int64_t b = c * grain;
        const std::int64_t e = std::min(n, b + grain);
        for (std::int64_t i = b; i < e; ++i) s.add(fn(i));
        partial[static_cast<std::size_t>(c)] = s.value();
    };
    const int workers = std::max(1, runtime::thread_count());
    if (workers == 1 || chunks == 1) {
        for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        const int use = static_cast<int>(std::min<std::int64_t>(workers, chunks));
        pool.reserve(static_cast<std::size_t>(use));
        for (int w = 0; w < use; ++w) {
            pool.emplace_back([&, w] {
                for (std::int64_t c = w; c < chunks; c += use) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }
    StableSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

/// count log-spaced values in [lo, hi], lo > 0.
inline std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || hi < lo || count < 1)
        throw std::invalid_argument("log_spaced: need 0 < lo <= hi, count >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

inline std::vector<double> lin_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    if (count == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ls_slope: need two samples");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
    return sxy / sxx;
}

}  // namespace muso
