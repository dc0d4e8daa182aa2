// musolab: configuration-driven experiments on Musielak-Orlicz-Sobolev
// modulars, norms and domain geometry.
//
//   musolab <subcommand> --config FILE [--set k=v]... [--csv DIR]
//                        [--threads N] [--seed S]
//
// Subcommands: phi-check | norm | char-bounds | density | halving |
//              embed-scan | extend
//
// Exit codes: 0 success, 2 a verified check failed, 64 usage/config error,
// 70 internal numeric error. Reports go to stdout as JSON (stable bytes for
// identical config+seed); timing goes to stderr.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "muso/config.hpp"
#include "muso/report.hpp"
#include "muso/version.hpp"

namespace {

using muso::Json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNumeric = 70;

struct CliArgs {
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string csv_dir;
    int threads = 1;
    std::optional<std::uint64_t> seed;
};

void print_usage(std::ostream& os) {
    os << "usage: musolab {phi-check|norm|char-bounds|density|halving|"
          "embed-scan|extend}\n"
          "               --config FILE [--set k=v]... [--csv DIR]"
          " [--threads N] [--seed S]\n";
}

CliArgs parse_args(int argc, char** argv) {
    CliArgs args;
    if (argc < 2) throw muso::ConfigError("missing subcommand");
    args.command = argv[1];
    const std::vector<std::string> known = {"phi-check", "norm",    "char-bounds",
                                            "density",   "halving", "embed-scan",
                                            "extend"};
    bool ok = false;
    for (const auto& k : known) ok = ok || k == args.command;
    if (!ok) throw muso::ConfigError("unknown subcommand '" + args.command + "'");
    for (int i = 2; i < argc; ++i) {
        const std::string a = argv[i];
        auto next = [&](const char* what) -> std::string {
            if (i + 1 >= argc)
                throw muso::ConfigError(std::string(what) + " needs an argument");
            return argv[++i];
        };
        if (a == "--config")
            args.config_path = next("--config");
        else if (a == "--set")
            args.overrides.push_back(next("--set"));
        else if (a == "--csv")
            args.csv_dir = next("--csv");
        else if (a == "--threads")
            args.threads = std::stoi(next("--threads"));
        else if (a == "--seed")
            args.seed = std::stoull(next("--seed"));
        else
            throw muso::ConfigError("unknown option '" + a + "'");
    }
    if (args.config_path.empty()) throw muso::ConfigError("--config is required");
    if (args.threads < 1) throw muso::ConfigError("--threads must be >= 1");
    return args;
}

struct RunContext {
    Json config;
    muso::Domain domain;
    muso::PhiFunction phi;
    muso::QuadratureRule rule;
    std::optional<muso::DecayData> decay;
    std::string csv_dir;
};

// Deterministic pair grid for the continuity checkers: all pairs of a coarse
// box grid, strided to a bounded count.
std::vector<muso::PointPair> continuity_pairs(const muso::Box& box, int per_axis,
                                              std::size_t max_pairs) {
    const auto pts = muso::box_grid(box, per_axis);
    std::vector<muso::PointPair> pairs;
    const std::size_t n = pts.size();
    const std::size_t total = n * (n - 1) / 2;
    const std::size_t stride = std::max<std::size_t>(1, total / max_pairs);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (k++ % stride == 0) pairs.push_back({pts[i], pts[j]});
    return pairs;
}

Json results_phi_check(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    const Json& opts = ctx.config.contains("phi_check") ? ctx.config.at("phi_check")
                                                        : Json::object();
    const int space_axis =
        static_cast<int>(config_detail::num_or(opts, "spatial_points_per_axis", 16));
    const int t_samples =
        static_cast<int>(config_detail::num_or(opts, "t_samples", 64));
    const double t_lo = config_detail::num_or(opts, "t_lo", 1e-3);
    const double t_hi = config_detail::num_or(opts, "t_hi", 1e3);
    const int k_lo = static_cast<int>(config_detail::num_or(opts, "ball_k_lo", 2));
    const int k_hi = static_cast<int>(config_detail::num_or(opts, "ball_k_hi", 8));
    const int max_pairs =
        static_cast<int>(config_detail::num_or(opts, "pair_count", 4096));

    const auto points = default_space_grid(ctx.phi.p.box, space_axis);
    const auto t_grid = log_spaced(t_lo, t_hi, t_samples);
    const auto pairs = continuity_pairs(ctx.phi.p.box, space_axis, max_pairs);

    Json out;
    const int dim = ctx.domain.dim;
    any_failed = false;
    auto track = [&any_failed](bool passes) { any_failed |= !passes; };

    const auto lh = check_log_holder(ctx.phi.p, pairs);
    out["p_log_holder"] = to_json(lh, dim);
    track(lh.passes);
    const auto llh = check_loglog_holder(ctx.phi.q, pairs);
    out["q_loglog_holder"] = to_json(llh, dim);
    track(llh.passes);

    if (ctx.decay) {
        const auto nek = check_nekvinda(ctx.phi.p, *ctx.decay, ctx.rule.resolution);
        out["nekvinda"] = to_json(nek);
        track(nek.passes);
    }

    const auto a0 = check_A0(ctx.phi, points);
    out["A0"] = to_json(a0, dim);
    track(a0.passes);

    std::vector<Ball> balls;
    const Point c = ctx.phi.p.box.center();
    for (int k = k_lo; k <= k_hi; ++k)
        balls.push_back({c, std::pow(2.0, -k)});
    const auto a1 = check_A1(ctx.phi, balls);
    out["A1"] = to_json(a1, dim);
    track(a1.passes);

    if (ctx.decay) {
        const auto a2 = check_A2(ctx.phi, *ctx.decay, points);
        out["A2"] = to_json(a2, dim);
        track(a2.passes);
    }

    const auto dec = check_dec(ctx.phi, t_grid, points);
    out["Dec"] = to_json(dec, dim);
    track(dec.passes);
    const auto ainc = check_ainc1(ctx.phi, t_grid, points);
    out["aInc1"] = to_json(ainc, dim);
    track(ainc.passes);

    out["all_pass"] = !any_failed;

    if (!ctx.csv_dir.empty()) {
        std::vector<muso::CsvRow> rows;
        for (const char* key : {"A0", "A1", "A2", "Dec", "aInc1"}) {
            if (!out.contains(key)) continue;
            rows.push_back({key, muso::csv_num(out[key]["beta_or_bound"].get<double>()),
                            out[key]["passes"].get<bool>() ? "1" : "0"});
        }
        write_csv(ctx.csv_dir, "phi_check.csv", {"condition", "beta_or_bound", "passes"},
                  rows);
    }
    return out;
}

Json results_norm(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    if (!ctx.config.contains("norm")) throw ConfigError("missing 'norm' block");
    const Json& opts = ctx.config.at("norm");
    const bool want_sobolev = opts.value("sobolev", false);
    const std::string grad_mode = opts.value("gradient", "analytic");

    GridFunction f;
    if (opts.contains("file")) {
        f = grid_function_from_csv(opts.at("file").get<std::string>(),
                                   ctx.domain.dim);
    } else if (opts.contains("function")) {
        const NormFunction nf = build_norm_function(opts.at("function"));
        std::optional<VectorFn> grad;
        if (grad_mode == "analytic" && nf.gradient) grad = nf.gradient;
        f = sample_function(ctx.domain, nf.value, ctx.rule, grad);
        if (grad_mode == "finite_difference") finite_difference_gradient(f);
    } else {
        throw ConfigError("norm block needs 'function' or 'file'");
    }
    if (want_sobolev && !f.has_gradient)
        throw ConfigError("norm: sobolev requested but no gradient available");

    Json out;
    out["modular"] = modular(f, ctx.phi);
    const auto ub = unit_ball_check(f, ctx.phi);
    out["norm"] = ub.norm;
    out["modular_at_norm"] = ub.rho_at_norm;
    out["unit_ball"] = to_json(ub);
    out["resolution"] = ctx.rule.resolution;
    out["scheme"] = ctx.config.contains("quadrature")
                        ? ctx.config.at("quadrature").value("scheme",
                                                            "boundary_refined_midpoint")
                        : "boundary_refined_midpoint";
    any_failed = !ub.passes;
    if (want_sobolev) out["sobolev_norm"] = sobolev_norm(f, ctx.phi);

    if (!ctx.csv_dir.empty()) {
        std::vector<CsvRow> rows{{csv_num(out["norm"].get<double>()),
                                  csv_num(out["modular_at_norm"].get<double>()),
                                  std::to_string(ctx.rule.resolution)}};
        write_csv(ctx.csv_dir, "norm.csv", {"norm", "modular_at_norm", "resolution"},
                  rows);
    }
    return out;
}

Json results_char_bounds(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    if (!ctx.config.contains("char_bounds"))
        throw ConfigError("missing 'char_bounds' block");
    const Json& opts = ctx.config.at("char_bounds");
    if (!opts.contains("set")) throw ConfigError("char_bounds needs 'set'");
    const Json& s = opts.at("set");
    const std::string kind = s.value("kind", "rect");
    Domain A;
    if (kind == "rect") {
        const Point lo = config_detail::point_at(s, "lo");
        const Point hi = config_detail::point_at(s, "hi", {1, 1});
        A = ctx.domain.dim == 1 ? domains::interval(lo.x, hi.x)
                                : domains::rectangle(lo.x, lo.y, hi.x, hi.y);
    } else if (kind == "disc") {
        A = domains::disc(config_detail::point_at(s, "center"),
                          config_detail::num_or(s, "radius", 0.25));
    } else {
        throw ConfigError("char_bounds set kind must be rect or disc");
    }
    const auto rep = char_fn_norm_bounds(A, ctx.phi, ctx.rule);
    const double slack = config_detail::num_or(opts, "slack", 1e-3);
    any_failed = rep.preconditions_met &&
                 !(rep.lower * (1.0 - slack) <= rep.computed_norm &&
                   rep.computed_norm <= rep.upper * (1.0 + slack));
    Json out = to_json(rep);
    out["sandwich_holds"] = !any_failed;
    if (!ctx.csv_dir.empty()) {
        write_csv(ctx.csv_dir, "char_bounds.csv",
                  {"measure", "lower", "norm", "upper", "case", "preconditions_met"},
                  {{csv_num(rep.measure), csv_num(rep.lower),
                    csv_num(rep.computed_norm), csv_num(rep.upper),
                    to_string(rep.lemma_case), rep.preconditions_met ? "1" : "0"}});
    }
    return out;
}

std::vector<double> radii_from(const Json& opts) {
    std::vector<double> radii;
    if (opts.contains("radii")) {
        for (const auto& r : opts.at("radii")) radii.push_back(r.get<double>());
    } else {
        const int klo = static_cast<int>(muso::config_detail::num_or(opts, "k_lo", 2));
        const int khi = static_cast<int>(muso::config_detail::num_or(opts, "k_hi", 12));
        for (int k = klo; k <= khi; ++k) radii.push_back(std::pow(2.0, -k));
    }
    return radii;
}

Json results_density(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    if (!ctx.config.contains("density")) throw ConfigError("missing 'density' block");
    const Json& opts = ctx.config.at("density");
    const double s = config_detail::num_or(opts, "s", ctx.domain.dim);
    const auto radii = radii_from(opts);
    int boundary_points =
        static_cast<int>(config_detail::num_or(opts, "boundary_points", 0));
    if (boundary_points <= 0)
        boundary_points =
            static_cast<int>(std::ceil(256.0 * ctx.domain.perimeter_hint));
    DensityOptions dopt;
    dopt.c_threshold = config_detail::num_or(opts, "threshold", 1e-6);
    dopt.slope_tol = config_detail::num_or(opts, "slope_tol", 0.05);

    DensityReport rep;
    if (opts.contains("alpha_grid") && !opts.at("alpha_grid").empty()) {
        std::vector<double> alphas;
        for (const auto& a : opts.at("alpha_grid")) alphas.push_back(a.get<double>());
        rep = log_density_fit(ctx.domain, s, alphas, radii, boundary_points,
                              ctx.rule, dopt);
    } else {
        rep = measure_density_check(ctx.domain, s, radii, boundary_points, ctx.rule,
                                    dopt);
    }
    any_failed = !rep.satisfied;
    const bool with_samples = opts.value("emit_samples", false);
    Json out = to_json(rep, ctx.domain.dim, with_samples);
    if (!ctx.csv_dir.empty()) {
        std::vector<CsvRow> rows;
        for (const auto& smp : rep.samples)
            rows.push_back({csv_num(smp.x.x), csv_num(smp.x.y), csv_num(smp.R),
                            csv_num(smp.measure), csv_num(smp.ratio)});
        write_csv(ctx.csv_dir, "density.csv", {"x", "y", "R", "measure", "ratio"},
                  rows);
    }
    return out;
}

Json results_halving(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    if (!ctx.config.contains("halving")) throw ConfigError("missing 'halving' block");
    const Json& opts = ctx.config.at("halving");
    const Point x = config_detail::point_at(opts, "x");
    const double r0 = config_detail::num_or(opts, "r0", 0.2);
    const int depth = static_cast<int>(config_detail::num_or(opts, "depth", 8));
    const auto seq = halving_sequence(ctx.domain, x, r0, depth, ctx.rule);
    double worst = 0.0;
    for (std::size_t i = 0; i < seq.measures.size(); ++i)
        worst = std::max(worst, std::abs(seq.measures[i] * std::pow(2.0, i) /
                                             seq.measures[0] -
                                         1.0));
    any_failed = worst > config_detail::num_or(opts, "halving_tol", 1e-3);
    Json out = to_json(seq, ctx.domain.dim);
    out["worst_halving_error"] = worst;
    out["halving_ok"] = !any_failed;
    if (!ctx.csv_dir.empty()) {
        std::vector<CsvRow> rows;
        for (std::size_t i = 0; i < seq.radii.size(); ++i)
            rows.push_back({std::to_string(i), csv_num(seq.radii[i]),
                            csv_num(seq.measures[i])});
        write_csv(ctx.csv_dir, "halving.csv", {"i", "R", "measure"}, rows);
    }
    return out;
}

Json results_embed_scan(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    if (!ctx.config.contains("embed_scan"))
        throw ConfigError("missing 'embed_scan' block");
    const Json& opts = ctx.config.at("embed_scan");
    const std::string family_name = opts.value("family", "square_v1");
    TestFamily family;
    try {
        family = named_test_family(family_name, ctx.domain);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto rep = embedding_ratio_scan(ctx.domain, ctx.phi, family, ctx.rule);
    any_failed = false;
    Json out = to_json(rep);
    if (!ctx.csv_dir.empty()) {
        std::vector<CsvRow> rows;
        for (const auto& row : rep.rows)
            rows.push_back({row.id, csv_num(row.norm_psi), csv_num(row.norm_w1phi),
                            csv_num(row.ratio)});
        write_csv(ctx.csv_dir, "embed_scan.csv",
                  {"id", "norm_psi", "norm_w1phi", "ratio"}, rows);
    }
    return out;
}

Json results_extend(const RunContext& ctx, bool& any_failed) {
    using namespace muso;
    if (!ctx.config.contains("extend")) throw ConfigError("missing 'extend' block");
    const Json& opts = ctx.config.at("extend");
    Box target = ctx.phi.p.box;
    if (opts.contains("target")) {
        const Json& t = opts.at("target");
        const Point lo = config_detail::point_at(t, "lo");
        const Point hi = config_detail::point_at(t, "hi", {1, 1});
        target = ctx.domain.dim == 1 ? box1d(lo.x, hi.x)
                                     : box2d(lo.x, lo.y, hi.x, hi.y);
    }
    const int samples =
        static_cast<int>(config_detail::num_or(opts, "samples_per_axis", 128));
    const int check_axis =
        static_cast<int>(config_detail::num_or(opts, "check_points_per_axis", 9));
    const int max_pairs =
        static_cast<int>(config_detail::num_or(opts, "pair_count", 2048));
    const std::string which = opts.value("which", "p");
    if (which != "p" && which != "q")
        throw ConfigError("extend: 'which' must be \"p\" or \"q\"");

    const ExponentField& p = which == "p" ? ctx.phi.p : ctx.phi.q;
    ExponentField ext;
    try {
        ext = mcshane_extend(p, target, samples);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    // restriction on the extension's own sample grid
    double worst_restriction = 0.0;
    for (const Point& y : box_grid(p.box, std::min(samples, 65)))
        worst_restriction = std::max(worst_restriction, std::abs(ext(y) - p(y)));

    // bound preservation over a grid covering the target box plus the original
    double lo_seen = std::numeric_limits<double>::infinity(), hi_seen = -lo_seen;
    auto scan_grid = box_grid(target, check_axis);
    const auto orig_grid = box_grid(p.box, check_axis);
    scan_grid.insert(scan_grid.end(), orig_grid.begin(), orig_grid.end());
    for (const Point& y : scan_grid) {
        const double v = ext(y);
        lo_seen = std::min(lo_seen, v);
        hi_seen = std::max(hi_seen, v);
    }

    // modulus preservation with the doubled constant
    ExponentField relaxed = ext;
    relaxed.modulus.constant = 2.0 * p.modulus.constant;
    std::vector<PointPair> pairs = continuity_pairs(target, check_axis, max_pairs);
    const auto pc = relaxed.modulus.kind == ModulusKind::loglog_holder
                        ? check_loglog_holder(relaxed, pairs)
                        : check_log_holder(relaxed, pairs);

    const bool restriction_ok = worst_restriction <= 1e-12;
    const bool bounds_ok = lo_seen >= p.inf_val - 1e-12 &&
                           hi_seen <= p.sup_val + 1e-12;
    any_failed = !(restriction_ok && bounds_ok && pc.passes);

    Json out;
    out["worst_restriction_error"] = worst_restriction;
    out["restriction_ok"] = restriction_ok;
    out["inf_seen"] = lo_seen;
    out["sup_seen"] = hi_seen;
    out["bounds_ok"] = bounds_ok;
    out["modulus_check"] = to_json(pc, ctx.domain.dim);
    out["extend_ok"] = !any_failed;
    if (!ctx.csv_dir.empty()) {
        write_csv(ctx.csv_dir, "extend.csv",
                  {"worst_restriction_error", "inf_seen", "sup_seen", "modulus_ratio",
                   "ok"},
                  {{csv_num(worst_restriction), csv_num(lo_seen), csv_num(hi_seen),
                    csv_num(pc.max_ratio), any_failed ? "0" : "1"}});
    }
    return out;
}

int run(const CliArgs& args) {
    using namespace muso;
    const auto t0 = std::chrono::steady_clock::now();

    RunContext ctx;
    ctx.config = load_config(args.config_path);
    for (const auto& ov : args.overrides) apply_override(ctx.config, ov);
    ctx.csv_dir = args.csv_dir;
    ctx.domain = build_domain(ctx.config);
    ctx.rule = build_rule(ctx.config);
    if (args.seed) ctx.rule.seed = *args.seed;
    ctx.decay = build_decay(ctx.config);
    runtime::thread_count() = args.threads;

    // phi is needed by every command except the purely geometric ones
    const bool needs_phi = args.command != "density" && args.command != "halving";
    if (needs_phi) ctx.phi = build_phi(ctx.config, ctx.domain);

    bool any_failed = false;
    Json results;
    try {
        if (args.command == "phi-check")
            results = results_phi_check(ctx, any_failed);
        else if (args.command == "norm")
            results = results_norm(ctx, any_failed);
        else if (args.command == "char-bounds")
            results = results_char_bounds(ctx, any_failed);
        else if (args.command == "density")
            results = results_density(ctx, any_failed);
        else if (args.command == "halving")
            results = results_halving(ctx, any_failed);
        else if (args.command == "embed-scan")
            results = results_embed_scan(ctx, any_failed);
        else
            results = results_extend(ctx, any_failed);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "musolab: numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }

    Json report;
    report["tool"] = kToolName;
    report["version"] = kVersion;
    report["command"] = args.command;
    if (args.seed) report["seed"] = *args.seed;
    report["config"] = ctx.config;
    report["results"] = results;
    std::cout << dump_json17(report);

    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "musolab: " << args.command << " finished in "
              << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    return any_failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc >= 2 &&
        (std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h")) {
        print_usage(std::cout);
        return kExitOk;
    }
    try {
        return run(parse_args(argc, argv));
    } catch (const muso::ConfigError& e) {
        std::cerr << "musolab: " << e.what() << "\n";
        print_usage(std::cerr);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "musolab: " << e.what() << "\n";
        return kExitNumeric;
    }
}
