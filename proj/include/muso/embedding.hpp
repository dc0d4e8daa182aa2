// Numerical reproduction of the necessity machinery: cut-off test functions,
// the halving-gap inequality with its three sign cases, the derived exponent
// bundle, density scans below the admissible radius, and embedding-ratio
// scans over fixed named test families.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "muso/conditions.hpp"
#include "muso/density.hpp"
#include "muso/modular.hpp"
#include "muso/phi.hpp"

namespace muso {

/// Piecewise-linear radial bump: 1 on the inner ball, 0 outside the outer
/// ball, linear ramp in between; |grad| = 1/(outer - inner) on the ramp.
struct CutoffFunction {
    Point center;
    double outer_R = 0.0;
    double inner_R = 0.0;

    double value(const Point& p) const {
        const double r = dist(p, center);
        if (r <= inner_R) return 1.0;
        if (r >= outer_R) return 0.0;
        return (outer_R - r) / (outer_R - inner_R);
    }
    Point gradient(const Point& p) const {
        const double r = dist(p, center);
        if (r <= inner_R || r >= outer_R || r == 0.0) return {};
        const double slope = -1.0 / (outer_R - inner_R);
        return (slope / r) * (p - center);
    }
};

inline CutoffFunction make_cutoff(Point x, double R, double R_tilde) {
    if (!(0.0 < R_tilde && R_tilde < R))
        throw std::invalid_argument("make_cutoff: need 0 < inner < outer");
    return CutoffFunction{x, R, R_tilde};
}

struct EmbeddingExponents {
    double eta_R = 0.0;   // 1/n + 1/p+ - 1/p-
    double beta_R = 0.0;  // 1 - n eta_R
    double Q = 0.0;       // -q-(n - p-) / (p-(n - p+))
    double T = 0.0;       // q+ + Q
    double S = 0.0;       // max(q+, Q, T)
    SignCase sign_case = SignCase::q_nonneg;
    double p_minus = 0.0, p_plus = 0.0;
    double q_minus = 0.0, q_plus = 0.0;
    bool eta_warning = false;  // eta_R <= 0 (possible above the radius threshold)
};

inline EmbeddingExponents embedding_exponents(const PhiFunction& phi,
                                              const std::vector<Point>& pts,
                                              int n) {
    if (pts.empty())
        throw std::invalid_argument("embedding_exponents: empty point set");
    EmbeddingExponents e;
    e.p_minus = std::numeric_limits<double>::infinity();
    e.p_plus = -e.p_minus;
    e.q_minus = e.p_minus;
    e.q_plus = e.p_plus;
    for (const Point& x : pts) {
        const double p = phi.p(x), q = phi.q(x);
        e.p_minus = std::min(e.p_minus, p);
        e.p_plus = std::max(e.p_plus, p);
        e.q_minus = std::min(e.q_minus, q);
        e.q_plus = std::max(e.q_plus, q);
    }
    if (!(e.p_plus < n))
        throw std::invalid_argument("embedding_exponents: requires sup p < n");
    e.eta_R = 1.0 / n + 1.0 / e.p_plus - 1.0 / e.p_minus;
    e.beta_R = 1.0 - n * e.eta_R;
    e.Q = -e.q_minus * (n - e.p_minus) / (e.p_minus * (n - e.p_plus));
    e.T = e.q_plus + e.Q;
    e.S = std::max({e.q_plus, e.Q, e.T});
    e.sign_case = detect_sign_case(phi, pts);
    e.eta_warning = !(e.eta_R > 0.0);
    return e;
}

/// Grid points of B_R(x) ∩ Ω, used for exponent extrema over the set. An odd
/// grid keeps the probe's axis rows, which matters for thin cusp slivers;
/// if even that fails, the probe point itself stands in (exponents are
/// continuous up to the closure).
inline std::vector<Point> ball_region_points(const Domain& dom, Point x, double R,
                                             int per_axis = 17) {
    const Box b = ball_box(dom, x, R);
    std::vector<Point> out;
    const auto ind = ball_indicator(dom, x, R);
    for (const Point& p : box_grid(b, per_axis))
        if (ind(p)) out.push_back(p);
    if (out.empty()) out.push_back(x);
    return out;
}

struct MainLemmaResult {
    double lhs = 0.0;                   // R - R~
    double rhs_without_constant = 0.0;  // |A|^eta (log(e+1/|A|))^kappa
    double implied_C = 0.0;
    SignCase sign_case = SignCase::q_nonneg;
    double measure = 0.0;
    double r_tilde_value = 0.0;
    double kappa = 0.0;
    EmbeddingExponents exponents;
};

/// Halving-gap inequality R - R~ <= C |A_R|^{eta_R} (log(e+1/|A_R|))^kappa
/// with kappa = q+, Q or S by the sign case of q on A_R; implied_C should
/// stay bounded over a radius scan when the embedding holds.
inline MainLemmaResult main_lemma_check(const Domain& dom, const PhiFunction& phi,
                                        Point x, double R,
                                        const QuadratureRule& rule) {
    MainLemmaResult res;
    res.measure = ball_intersection_measure(dom, x, R, rule);
    if (!(res.measure > 0.0))
        throw std::invalid_argument("main_lemma_check: |A_R| = 0");
    if (res.measure > 1.0)
        throw std::invalid_argument("main_lemma_check: requires |A_R| <= 1");
    const auto pts = ball_region_points(dom, x, R);
    if (pts.empty())
        throw std::invalid_argument("main_lemma_check: no sample points in A_R");
    res.exponents = embedding_exponents(phi, pts, phi.dimension);
    res.sign_case = res.exponents.sign_case;
    if (res.sign_case != SignCase::q_nonneg &&
        phi.p.inf_val + phi.q.inf_val < 1.0)
        throw std::invalid_argument(
            "main_lemma_check: sign cases with negative q need inf p + inf q >= 1");
    switch (res.sign_case) {
        case SignCase::q_nonneg: res.kappa = res.exponents.q_plus; break;
        case SignCase::q_negative: res.kappa = res.exponents.Q; break;
        case SignCase::q_mixed: res.kappa = res.exponents.S; break;
    }
    res.r_tilde_value = r_tilde(dom, x, R, rule);
    res.lhs = R - res.r_tilde_value;
    res.rhs_without_constant = std::pow(res.measure, res.exponents.eta_R) *
                               std::pow(loge(1.0 / res.measure), res.kappa);
    res.implied_C = res.lhs / res.rhs_without_constant;
    return res;
}

/// Admissible radius threshold for the density scan.
inline double density_scan_r0(double c_log, int n) {
    return 0.5 * std::min(0.25, 0.5 * std::exp(-n * c_log));
}

struct DensityScanRow {
    double R = 0.0;
    double measure = 0.0;
    double eta = 0.0;
    double kappa = 0.0;
    double p_minus = 0.0, p_plus = 0.0;
    double q_minus = 0.0, q_plus = 0.0;
    double value = 0.0;  // |A_R| (log(e+1/|A_R|))^{kappa/eta} / R^n
};

struct DensityScanResult {
    double c_density = 0.0;
    double exponent = 0.0;  // kappa of the whole-domain extrema
    SignCase sign_case = SignCase::q_nonneg;
    double r0 = 0.0;
    std::vector<DensityScanRow> rows;
};

/// Per-radius check |A_R| (log(e+1/|A_R|))^{kappa/eta_R} >= c R^n below the
/// admissible threshold r0; reports the minimal empirical c.
inline DensityScanResult density_from_scan(const Domain& dom, const PhiFunction& phi,
                                           Point x, const std::vector<double>& radii,
                                           const QuadratureRule& rule,
                                           double c_log) {
    if (radii.empty())
        throw std::invalid_argument("density_from_scan: empty radius set");
    const int n = phi.dimension;
    DensityScanResult out;
    out.r0 = density_scan_r0(c_log, n);
    for (double R : radii)
        if (R > out.r0)
            throw std::invalid_argument(
                "density_from_scan: radius above the admissible threshold r0");
    const auto domain_pts = default_space_grid(phi.p.box, 32);
    out.sign_case = detect_sign_case(phi, domain_pts);
    const auto glob = embedding_exponents(phi, domain_pts, n);
    switch (out.sign_case) {
        case SignCase::q_nonneg: out.exponent = glob.q_plus; break;
        case SignCase::q_negative: out.exponent = glob.Q; break;
        case SignCase::q_mixed: out.exponent = glob.S; break;
    }
    out.c_density = std::numeric_limits<double>::infinity();
    for (double R : radii) {
        DensityScanRow row;
        row.R = R;
        row.measure = ball_intersection_measure(dom, x, R, rule);
        const auto pts = ball_region_points(dom, x, R);
        const auto e = embedding_exponents(phi, pts, n);
        row.eta = e.eta_R;
        row.p_minus = e.p_minus;
        row.p_plus = e.p_plus;
        row.q_minus = e.q_minus;
        row.q_plus = e.q_plus;
        switch (out.sign_case) {
            case SignCase::q_nonneg: row.kappa = e.q_plus; break;
            case SignCase::q_negative: row.kappa = e.Q; break;
            case SignCase::q_mixed: row.kappa = e.S; break;
        }
        row.value = row.measure *
                    std::pow(loge(1.0 / row.measure), row.kappa / row.eta) /
                    std::pow(R, n);
        out.c_density = std::min(out.c_density, row.value);
        out.rows.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Embedding-ratio scans over fixed test families.
// ---------------------------------------------------------------------------

struct TestField {
    std::string id;
    ScalarFn value;
    VectorFn gradient;
};

struct TestFamily {
    std::string name;
    std::vector<TestField> tests;
};

inline TestField cutoff_test(const std::string& id, Point c, double R,
                             double R_tilde) {
    const CutoffFunction cf = make_cutoff(c, R, R_tilde);
    return TestField{
        id, [cf](const Point& p) { return cf.value(p); },
        [cf](const Point& p) { return cf.gradient(p); }};
}

/// Fixed, versioned families so scans are comparable across runs. Positions
/// scale with the domain bounding box.
inline TestFamily named_test_family(const std::string& name, const Domain& dom) {
    TestFamily fam;
    fam.name = name;
    const Box b = dom.bbox;
    const double scale = std::min(b.width(), dom.dim == 2 ? b.height() : b.width());
    if (name == "square_v1") {
        fam.tests.push_back({"const_one", [](const Point&) { return 1.0; },
                             [](const Point&) { return Point{}; }});
        fam.tests.push_back({"ramp_x",
                             [b](const Point& p) { return p.x - b.lo.x; },
                             [](const Point&) { return Point{1.0, 0.0}; }});
        fam.tests.push_back({"ramp_y",
                             [b](const Point& p) { return p.y - b.lo.y; },
                             [](const Point&) { return Point{0.0, 1.0}; }});
        fam.tests.push_back(cutoff_test("cutoff_center", b.center(), 0.4 * scale,
                                        0.2 * scale));
        fam.tests.push_back(cutoff_test("cutoff_corner", b.lo, 0.3 * scale,
                                        0.15 * scale));
        const Point c = b.center();
        const double R0 = 0.45 * scale;
        const double a = M_PI / (2.0 * R0);
        fam.tests.push_back(
            {"radial_bump",
             [c, R0, a](const Point& p) {
                 const double r = dist(p, c);
                 if (r >= R0) return 0.0;
                 const double v = std::cos(a * r);
                 return v * v;
             },
             [c, R0, a](const Point& p) {
                 const double r = dist(p, c);
                 if (r >= R0 || r == 0.0) return Point{};
                 const double slope = -a * std::sin(2.0 * a * r);
                 return (slope / r) * (p - c);
             }});
        return fam;
    }
    if (name == "cusp_tip_v1") {
        // outer radii large enough that regular grids resolve the thin tip
        fam.tests.push_back(cutoff_test("tip_cutoff", {0.0, 0.0}, 0.4, 0.2));
        fam.tests.push_back(cutoff_test("tip_cutoff_small", {0.0, 0.0}, 0.25, 0.125));
        fam.tests.push_back(cutoff_test("interior_cutoff", {0.7, 0.0}, 0.15, 0.075));
        return fam;
    }
    throw std::invalid_argument("named_test_family: unknown family " + name);
}

struct EmbeddingScanRow {
    std::string id;
    double norm_psi = 0.0;
    double norm_w1phi = 0.0;
    double ratio = 0.0;
};

struct EmbeddingScanReport {
    std::string family;
    std::vector<EmbeddingScanRow> rows;
    double sup_ratio = 0.0;
};

/// ||u||_Psi / ||u||_{W^1,Phi} for every test in the family; the supremum is
/// an empirical lower bound on the embedding constant.
inline EmbeddingScanReport embedding_ratio_scan(const Domain& dom,
                                                const PhiFunction& phi,
                                                const TestFamily& family,
                                                const QuadratureRule& rule) {
    if (dom.dim != 2 || phi.dimension != 2)
        throw std::invalid_argument(
            "embedding_ratio_scan: only planar scans support sup p < n");
    if (!(phi.p.sup_val < phi.dimension))
        throw std::invalid_argument("embedding_ratio_scan: requires sup p < n");
    if (family.tests.empty())
        throw std::invalid_argument("embedding_ratio_scan: empty test family");
    EmbeddingScanReport rep;
    rep.family = family.name;
    for (const TestField& test : family.tests) {
        GridFunction u;
        try {
            u = sample_function(dom, test.value, rule, test.gradient);
        } catch (const std::exception& e) {
            throw std::runtime_error("embedding_ratio_scan: test '" + test.id +
                                     "': " + e.what());
        }
        EmbeddingScanRow row;
        row.id = test.id;
        row.norm_psi = luxemburg_norm(u, psi_integrand(phi));
        row.norm_w1phi = sobolev_norm(u, phi);
        if (!(row.norm_w1phi > 0.0))
            throw std::runtime_error("embedding_ratio_scan: test '" + test.id +
                                     "' has zero Sobolev norm");
        row.ratio = row.norm_psi / row.norm_w1phi;
        rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace muso
