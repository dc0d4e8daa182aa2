// Halving radii and (log) s-measure density scans. Verdicts are sampled
// falsification results: "satisfied" records that no violation was found on
// the probe set, never a universal certificate.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "muso/common.hpp"
#include "muso/domain.hpp"
#include "muso/quadrature.hpp"

namespace muso {

/// Smallest radius at which |B_R'(x) ∩ Ω| reaches half of |B_R(x) ∩ Ω|.
/// All measures inside one call share a fixed grid over the R-ball box, so
/// the bisection runs on an exactly monotone discrete map; the left edge of
/// the final bracket (width <= rel_bracket * R) is returned.
inline double r_tilde(const Domain& dom, Point x, double R,
                      const QuadratureRule& rule, double rel_bracket = 1e-6) {
    if (!(R > 0)) throw std::invalid_argument("r_tilde: need R > 0");
    const Box gbox = ball_box(dom, x, R);
    auto measure_at = [&](double r) {
        return region_measure(ball_indicator(dom, x, r), gbox, rule);
    };
    const double m_R = measure_at(R);
    if (!(m_R > 0.0)) throw std::invalid_argument("r_tilde: |B_R ∩ Ω| = 0");
    const double target = 0.5 * m_R;
    double lo = 0.0, hi = R;
    while (hi - lo > rel_bracket * R) {
        const double mid = 0.5 * (lo + hi);
        if (measure_at(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

struct HalvingSequence {
    Point x;
    double R0 = 0.0;
    std::vector<double> radii;     // strictly decreasing, radii[0] = R0
    std::vector<double> measures;  // |B_{radii[i]}(x) ∩ Ω|
};

inline HalvingSequence halving_sequence(const Domain& dom, Point x, double R0,
                                        int depth, const QuadratureRule& rule) {
    if (depth < 1) throw std::invalid_argument("halving_sequence: depth >= 1");
    HalvingSequence seq;
    seq.x = x;
    seq.R0 = R0;
    double R = R0;
    seq.radii.push_back(R);
    seq.measures.push_back(ball_intersection_measure(dom, x, R, rule));
    if (!(seq.measures[0] > 0.0))
        throw std::invalid_argument("halving_sequence: starting measure is 0");
    for (int i = 0; i < depth; ++i) {
        R = r_tilde(dom, x, R, rule);
        seq.radii.push_back(R);
        seq.measures.push_back(ball_intersection_measure(dom, x, R, rule));
    }
    return seq;
}

struct DensitySample {
    Point x;
    double R = 0.0;
    double measure = 0.0;
    double ratio = 0.0;  // measure / (R^s (log(1/R))^{-alpha})
};

struct DensityReport {
    double s = 0.0;
    double alpha = 0.0;
    double c_fit = 0.0;
    Point worst_x;
    double worst_R = 0.0;
    bool satisfied = false;
    /// Worst per-probe least-squares slope of log ratio vs log R. Positive
    /// means that probe's ratios decay as R shrinks; the verdict rejects
    /// decay beyond the tolerance. Increase toward small R is benign for a
    /// lower bound, so the test is one-sided.
    double slope = 0.0;
    std::vector<DensitySample> samples;
    std::vector<double> r_values;
    std::vector<double> per_r_min;
};

struct DensityOptions {
    double c_threshold = 1e-6;
    double slope_tol = 0.05;
    int interior_probes_per_axis = 5;
};

namespace density_detail {

inline std::vector<Point> probe_set(const Domain& dom, int boundary_count,
                                    int interior_per_axis) {
    std::vector<Point> probes = dom.boundary_sampler(boundary_count);
    probes.insert(probes.end(), dom.mandatory_probes.begin(),
                  dom.mandatory_probes.end());
    if (interior_per_axis > 1) {
        const auto xs =
            lin_spaced(dom.bbox.lo.x, dom.bbox.hi.x, interior_per_axis + 2);
        const auto ys = dom.dim == 2 ? lin_spaced(dom.bbox.lo.y, dom.bbox.hi.y,
                                                  interior_per_axis + 2)
                                     : std::vector<double>{0.0};
        for (double y : ys)
            for (double x : xs)
                if (dom.inside({x, y})) probes.push_back({x, y});
    }
    return probes;
}

struct MeasureTable {
    std::vector<Point> probes;
    std::vector<double> radii;                 // descending
    std::vector<std::vector<double>> measure;  // [radius][probe]
};

inline MeasureTable measure_table(const Domain& dom, std::vector<double> radii,
                                  int boundary_count, const QuadratureRule& rule,
                                  int interior_per_axis) {
    if (radii.empty()) throw std::invalid_argument("density scan: empty radius set");
    for (double R : radii)
        if (!(R > 0.0 && R <= 0.5))
            throw std::invalid_argument("density scan: radii must lie in (0, 1/2]");
    std::sort(radii.begin(), radii.end(), std::greater<double>());
    MeasureTable tab;
    tab.probes = probe_set(dom, boundary_count, interior_per_axis);
    tab.radii = std::move(radii);
    tab.measure.resize(tab.radii.size());
    for (std::size_t r = 0; r < tab.radii.size(); ++r) {
        tab.measure[r].resize(tab.probes.size());
        for (std::size_t p = 0; p < tab.probes.size(); ++p)
            tab.measure[r][p] =
                ball_intersection_measure(dom, tab.probes[p], tab.radii[r], rule);
    }
    return tab;
}

inline DensityReport assemble(const MeasureTable& tab, double s, double alpha,
                              const DensityOptions& opt) {
    DensityReport rep;
    rep.s = s;
    rep.alpha = alpha;
    rep.c_fit = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < tab.radii.size(); ++r) {
        const double R = tab.radii[r];
        const double corr = std::pow(std::log(1.0 / R), -alpha);
        double row_min = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < tab.probes.size(); ++p) {
            const double m = tab.measure[r][p];
            const double ratio = m / (std::pow(R, s) * corr);
            rep.samples.push_back({tab.probes[p], R, m, ratio});
            if (ratio < row_min) row_min = ratio;
            if (ratio < rep.c_fit) {
                rep.c_fit = ratio;
                rep.worst_x = tab.probes[p];
                rep.worst_R = R;
            }
        }
        rep.r_values.push_back(R);
        rep.per_r_min.push_back(row_min);
    }
    // per-probe decay detection: any probe whose ratios shrink with R
    // falsifies the bound at that probe, regardless of the other probes
    rep.slope = -std::numeric_limits<double>::infinity();
    bool degenerate = false;
    for (std::size_t p = 0; p < tab.probes.size(); ++p) {
        std::vector<double> log_r, log_c;
        for (std::size_t r = 0; r < tab.radii.size(); ++r) {
            const std::size_t idx = r * tab.probes.size() + p;
            const double ratio = rep.samples[idx].ratio;
            if (ratio > 0.0) {
                log_r.push_back(std::log(tab.radii[r]));
                log_c.push_back(std::log(ratio));
            } else {
                degenerate = true;
            }
        }
        if (log_r.size() >= 2)
            rep.slope = std::max(rep.slope, ls_slope(log_r, log_c));
    }
    if (!std::isfinite(rep.slope)) rep.slope = 0.0;
    rep.satisfied = !degenerate && rep.c_fit >= opt.c_threshold &&
                    rep.slope <= opt.slope_tol;
    return rep;
}

}  // namespace density_detail

/// Plain s-measure density probe (alpha = 0): c_fit is the worst ratio
/// measure / R^s over boundary samples, mandatory probes and a coarse
/// interior grid; the verdict also requires the per-R minima not to drift.
inline DensityReport measure_density_check(const Domain& dom, double s,
                                           const std::vector<double>& radii,
                                           int boundary_count,
                                           const QuadratureRule& rule,
                                           DensityOptions opt = {}) {
    const auto tab = density_detail::measure_table(dom, radii, boundary_count, rule,
                                                   opt.interior_probes_per_axis);
    return density_detail::assemble(tab, s, 0.0, opt);
}

/// Log-corrected fit: scans alpha_grid in increasing order and returns the
/// smallest alpha whose corrected ratios pass the drift test; if none does,
/// the alpha with the flattest fit is returned with satisfied = false.
inline DensityReport log_density_fit(const Domain& dom, double s,
                                     std::vector<double> alpha_grid,
                                     const std::vector<double>& radii,
                                     int boundary_count, const QuadratureRule& rule,
                                     DensityOptions opt = {}) {
    if (alpha_grid.empty())
        throw std::invalid_argument("log_density_fit: empty alpha grid");
    std::sort(alpha_grid.begin(), alpha_grid.end());
    const auto tab = density_detail::measure_table(dom, radii, boundary_count, rule,
                                                   opt.interior_probes_per_axis);
    DensityReport best;
    bool have_best = false;
    for (double alpha : alpha_grid) {
        DensityReport rep = density_detail::assemble(tab, s, alpha, opt);
        if (rep.satisfied) return rep;
        if (!have_best || std::abs(rep.slope) < std::abs(best.slope)) {
            best = rep;
            have_best = true;
        }
    }
    return best;
}

}  // namespace muso
