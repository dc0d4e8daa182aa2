// Experiment configuration: one JSON document per run, overridable from the
// command line with dotted --set paths. Builders turn the parsed document
// into domains, exponent fields and quadrature rules.
#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "muso/domain.hpp"
#include "muso/exponent_field.hpp"
#include "muso/grid_function.hpp"
#include "muso/phi.hpp"
#include "muso/quadrature.hpp"

namespace muso {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

inline Json parse_config_text(const std::string& text, const std::string& origin) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw ConfigError("config parse error in " + origin);
    if (!doc.is_object())
        throw ConfigError("config root must be an object: " + origin);
    return doc;
}

inline Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config_text(text, path);
}

/// Apply "dotted.path=value" overrides; values parse as JSON when possible
/// and fall back to strings.
inline void apply_override(Json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string val = assignment.substr(eq + 1);
    Json parsed = Json::parse(val, nullptr, false);
    if (parsed.is_discarded()) parsed = val;
    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw ConfigError("--set: empty path segment in " + key);
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            return;
        }
        node = &(*node)[part];
        if (!node->is_object() && !node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

namespace config_detail {

inline double num_or(const Json& j, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    const Json& v = j.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ConfigError("expected number for '" + key + "', got string " + s);
    }
    if (!v.is_number()) throw ConfigError("expected number for key '" + key + "'");
    return v.get<double>();
}

inline double require_num(const Json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing required key '" + key + "'");
    return num_or(j, key, 0.0);
}

inline Point point_at(const Json& j, const std::string& key,
                      Point dflt = {}) {
    if (!j.contains(key)) return dflt;
    const Json& a = j.at(key);
    if (!a.is_array() || a.empty() || a.size() > 2)
        throw ConfigError("key '" + key + "' must be [x] or [x,y]");
    Point p;
    p.x = a[0].get<double>();
    if (a.size() == 2) p.y = a[1].get<double>();
    return p;
}

}  // namespace config_detail

inline Domain build_domain(const Json& cfg) {
    if (!cfg.contains("domain")) throw ConfigError("missing 'domain' block");
    const Json& d = cfg.at("domain");
    const std::string kind = d.value("kind", "");
    using namespace config_detail;
    try {
        if (kind == "interval")
            return domains::interval(num_or(d, "a", 0.0), num_or(d, "b", 1.0));
        if (kind == "square") return domains::square(num_or(d, "side", 1.0));
        if (kind == "rectangle") {
            const Point lo = point_at(d, "lo"), hi = point_at(d, "hi", {1, 1});
            return domains::rectangle(lo.x, lo.y, hi.x, hi.y);
        }
        if (kind == "disc")
            return domains::disc(point_at(d, "center"), num_or(d, "radius", 1.0));
        if (kind == "polygon") {
            if (d.contains("file"))
                return domains::polygon_from_csv(d.at("file").get<std::string>());
            std::vector<Point> ring;
            for (const auto& v : d.at("vertices"))
                ring.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
            return domains::polygon(std::move(ring));
        }
        if (kind == "power_cusp")
            return domains::power_cusp(num_or(d, "kappa", 2.0));
        if (kind == "log_cusp") return domains::log_cusp();
        if (kind == "rooms_corridors")
            return domains::rooms_corridor(num_or(d, "corridor_width", 0.1));
        if (kind == "half_plane")
            return domains::half_plane(num_or(d, "extent", 2.0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    throw ConfigError("unknown domain kind '" + kind + "'");
}

inline Modulus build_modulus(const Json& spec) {
    Modulus m;
    if (spec.is_null()) return m;
    const std::string kind = spec.value("kind", "log_holder");
    if (kind == "log_holder")
        m.kind = ModulusKind::log_holder;
    else if (kind == "loglog_holder")
        m.kind = ModulusKind::loglog_holder;
    else
        throw ConfigError("modulus kind must be log_holder or loglog_holder here");
    m.constant = config_detail::num_or(spec, "constant", 1.0);
    return m;
}

inline ExponentField build_field(const Json& spec, const Box& box) {
    using namespace config_detail;
    const std::string form = spec.value("form", "");
    const Modulus m =
        spec.contains("modulus") ? build_modulus(spec.at("modulus")) : Modulus{};
    try {
        if (form == "constant")
            return fields::constant(require_num(spec, "value"), box, m);
        if (form == "affine")
            return fields::affine(num_or(spec, "a", 0.0), num_or(spec, "bx", 0.0),
                                  num_or(spec, "by", 0.0), box, m);
        if (form == "sine")
            return fields::sine(require_num(spec, "base"), num_or(spec, "amp", 0.0),
                                num_or(spec, "fx", 1.0), num_or(spec, "fy", 1.0),
                                box, m);
        if (form == "log_bump")
            return fields::log_bump(require_num(spec, "base"),
                                    num_or(spec, "amp", 1.0),
                                    num_or(spec, "constant", 1.0),
                                    point_at(spec, "center"), box);
        if (form == "loglog_bump")
            return fields::loglog_bump(require_num(spec, "base"),
                                       num_or(spec, "amp", 1.0),
                                       num_or(spec, "constant", 1.0),
                                       point_at(spec, "center"), box);
        if (form == "sqrt_bump")
            return fields::sqrt_bump(require_num(spec, "base"),
                                     point_at(spec, "center"), box, m);
        if (form == "gaussian")
            return fields::gaussian(require_num(spec, "base"),
                                    num_or(spec, "amp", 1.0),
                                    num_or(spec, "sigma", 0.5),
                                    point_at(spec, "center"), box, m);
        if (form == "grid_file")
            return fields::from_grid_csv(spec.at("file").get<std::string>(), m);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("exponent field: ") + e.what());
    }
    throw ConfigError("unknown exponent form '" + form + "'");
}

inline PhiFunction build_phi(const Json& cfg, const Domain& dom) {
    if (!cfg.contains("exponents")) throw ConfigError("missing 'exponents' block");
    const Json& e = cfg.at("exponents");
    Box box = dom.bbox;
    if (e.contains("box")) {
        const Json& b = e.at("box");
        const Point lo = config_detail::point_at(b, "lo");
        const Point hi = config_detail::point_at(b, "hi", {1, 1});
        box = dom.dim == 1 ? box1d(lo.x, hi.x) : box2d(lo.x, lo.y, hi.x, hi.y);
    }
    if (!e.contains("p") || !e.contains("q"))
        throw ConfigError("exponents block needs 'p' and 'q'");
    ExponentField p = build_field(e.at("p"), box);
    ExponentField q = build_field(e.at("q"), box);
    try {
        return make_phi(std::move(p), std::move(q), dom.dim);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("exponents: ") + ex.what());
    }
}

inline std::optional<DecayData> build_decay(const Json& cfg) {
    if (!cfg.contains("exponents")) return std::nullopt;
    const Json& e = cfg.at("exponents");
    if (!e.contains("decay")) return std::nullopt;
    const Json& d = e.at("decay");
    DecayData out;
    out.p_infinity = config_detail::num_or(d, "p_infinity", 2.0);
    out.nekvinda_c1 = config_detail::num_or(d, "c1", 0.5);
    try {
        validate_decay(out);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("decay: ") + ex.what());
    }
    return out;
}

inline QuadratureRule build_rule(const Json& cfg) {
    QuadratureRule rule;
    if (!cfg.contains("quadrature")) return rule;
    const Json& q = cfg.at("quadrature");
    const std::string scheme = q.value("scheme", "boundary_refined_midpoint");
    if (scheme == "midpoint")
        rule.scheme = QuadScheme::midpoint;
    else if (scheme == "boundary_refined_midpoint")
        rule.scheme = QuadScheme::boundary_refined_midpoint;
    else if (scheme == "monte_carlo")
        rule.scheme = QuadScheme::monte_carlo;
    else
        throw ConfigError("unknown quadrature scheme '" + scheme + "'");
    rule.resolution = static_cast<int>(config_detail::num_or(q, "resolution", 64));
    if (rule.resolution <= 0) throw ConfigError("quadrature resolution must be > 0");
    rule.seed = static_cast<std::uint64_t>(config_detail::num_or(q, "seed", 1));
    rule.refine_depth =
        static_cast<int>(config_detail::num_or(q, "refine_depth", 6));
    rule.leaf_samples =
        static_cast<int>(config_detail::num_or(q, "leaf_samples", 4));
    return rule;
}

/// Test-function forms for the norm command; each carries its analytic
/// gradient where one exists.
struct NormFunction {
    ScalarFn value;
    std::optional<VectorFn> gradient;
};

inline NormFunction build_norm_function(const Json& spec) {
    using namespace config_detail;
    const std::string form = spec.value("form", "");
    if (form == "constant") {
        const double v = require_num(spec, "value");
        return {[v](const Point&) { return v; },
                VectorFn{[](const Point&) { return Point{}; }}};
    }
    if (form == "affine") {
        const double a = num_or(spec, "a", 0.0);
        const double bx = num_or(spec, "bx", 0.0);
        const double by = num_or(spec, "by", 0.0);
        return {[a, bx, by](const Point& p) { return a + bx * p.x + by * p.y; },
                VectorFn{[bx, by](const Point&) { return Point{bx, by}; }}};
    }
    if (form == "indicator_rect") {
        const Point lo = point_at(spec, "lo"), hi = point_at(spec, "hi", {1, 1});
        return {[lo, hi](const Point& p) {
                    return (p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y)
                               ? 1.0
                               : 0.0;
                },
                std::nullopt};
    }
    if (form == "cutoff") {
        const Point c = point_at(spec, "center");
        const double R = require_num(spec, "outer");
        const double Rt = require_num(spec, "inner");
        if (!(0 < Rt && Rt < R)) throw ConfigError("cutoff: need 0 < inner < outer");
        return {[c, R, Rt](const Point& p) {
                    const double r = dist(p, c);
                    if (r <= Rt) return 1.0;
                    if (r >= R) return 0.0;
                    return (R - r) / (R - Rt);
                },
                VectorFn{[c, R, Rt](const Point& p) {
                    const double r = dist(p, c);
                    if (r <= Rt || r >= R || r == 0.0) return Point{};
                    return (-1.0 / ((R - Rt) * r)) * (p - c);
                }}};
    }
    throw ConfigError("unknown norm function form '" + form + "'");
}

}  // namespace muso
