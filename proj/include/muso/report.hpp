// JSON/CSV serialization of the report structures. Floating-point values are
// printed with 17 significant digits so that reparsing reproduces the doubles
// exactly; key order is insertion order, so equal runs emit equal bytes.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muso/conditions.hpp"
#include "muso/density.hpp"
#include "muso/embedding.hpp"
#include "muso/exponent_field.hpp"
#include "muso/modular.hpp"

namespace muso {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Serialize with %.17g doubles; everything else follows nlohmann's escaping.
inline void dump_json17(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump_json17(it.value(), out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump_json17(v, out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

inline std::string dump_json17(const Json& j) {
    std::string out;
    dump_json17(j, out);
    out += '\n';
    return out;
}

inline Json to_json(const Point& p, int dim) {
    Json a = Json::array();
    a.push_back(p.x);
    if (dim == 2) a.push_back(p.y);
    return a;
}

inline Json to_json(const ConditionWitness& w, int dim) {
    Json j;
    j["x"] = to_json(w.x, dim);
    j["y"] = to_json(w.y, dim);
    j["t"] = w.t;
    j["t2"] = w.t2;
    j["value"] = w.value;
    return j;
}

inline Json to_json(const ConditionReport& r, int dim) {
    Json j;
    j["condition"] = to_string(r.condition);
    j["beta_or_bound"] = r.beta_or_bound;
    j["passes"] = r.passes;
    Json ws = Json::array();
    for (const auto& w : r.witnesses) ws.push_back(to_json(w, dim));
    j["witnesses"] = ws;
    if (r.condition == PhiCondition::A1) j["proof_bound"] = r.proof_bound;
    return j;
}

inline Json to_json(const PairCheckReport& r, int dim) {
    Json j;
    j["max_ratio"] = r.max_ratio;
    j["passes"] = r.passes;
    j["worst_x"] = to_json(r.worst_x, dim);
    j["worst_y"] = to_json(r.worst_y, dim);
    return j;
}

inline Json to_json(const NekvindaReport& r) {
    Json j;
    j["integral_estimate"] = r.integral_estimate;
    j["passes"] = r.passes;
    return j;
}

inline Json to_json(const NormBoundsReport& r) {
    Json j;
    j["lemma_case"] = to_string(r.lemma_case);
    j["preconditions_met"] = r.preconditions_met;
    j["measure"] = r.measure;
    j["lower"] = r.lower;
    j["upper"] = r.upper;
    j["computed_norm"] = r.computed_norm;
    j["p_minus"] = r.p_minus;
    j["p_plus"] = r.p_plus;
    j["q_minus"] = r.q_minus;
    j["q_plus"] = r.q_plus;
    j["b1"] = r.b1;
    j["b2"] = r.b2;
    if (r.lemma_case == SignCase::q_mixed) {
        j["b1_literal"] = r.b1_literal;
        j["lower_literal"] = r.lower_literal;
    }
    return j;
}

inline Json to_json(const UnitBallReport& r) {
    Json j;
    j["norm"] = r.norm;
    j["rho_at_norm"] = r.rho_at_norm;
    j["passes"] = r.passes;
    return j;
}

inline Json to_json(const DensityReport& r, int dim, bool with_samples = true) {
    Json j;
    j["s"] = r.s;
    j["alpha"] = r.alpha;
    j["c_fit"] = r.c_fit;
    j["slope"] = r.slope;
    j["satisfied"] = r.satisfied;
    j["worst_x"] = to_json(r.worst_x, dim);
    j["worst_R"] = r.worst_R;
    j["r_values"] = r.r_values;
    j["per_r_min"] = r.per_r_min;
    if (with_samples) {
        Json rows = Json::array();
        for (const auto& s : r.samples) {
            Json row;
            row["x"] = to_json(s.x, dim);
            row["R"] = s.R;
            row["measure"] = s.measure;
            row["ratio"] = s.ratio;
            rows.push_back(row);
        }
        j["samples"] = rows;
    }
    return j;
}

inline Json to_json(const HalvingSequence& r, int dim) {
    Json j;
    j["x"] = to_json(r.x, dim);
    j["R0"] = r.R0;
    j["radii"] = r.radii;
    j["measures"] = r.measures;
    return j;
}

inline Json to_json(const EmbeddingExponents& e) {
    Json j;
    j["eta_R"] = e.eta_R;
    j["beta_R"] = e.beta_R;
    j["Q"] = e.Q;
    j["T"] = e.T;
    j["S"] = e.S;
    j["case"] = to_string(e.sign_case);
    j["p_minus"] = e.p_minus;
    j["p_plus"] = e.p_plus;
    j["q_minus"] = e.q_minus;
    j["q_plus"] = e.q_plus;
    j["eta_warning"] = e.eta_warning;
    return j;
}

inline Json to_json(const MainLemmaResult& r) {
    Json j;
    j["lhs"] = r.lhs;
    j["rhs_without_constant"] = r.rhs_without_constant;
    j["implied_C"] = r.implied_C;
    j["case"] = to_string(r.sign_case);
    j["measure"] = r.measure;
    j["r_tilde"] = r.r_tilde_value;
    j["kappa"] = r.kappa;
    j["exponents"] = to_json(r.exponents);
    return j;
}

inline Json to_json(const DensityScanResult& r) {
    Json j;
    j["c_density"] = r.c_density;
    j["exponent"] = r.exponent;
    j["case"] = to_string(r.sign_case);
    j["r0"] = r.r0;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json x;
        x["R"] = row.R;
        x["measure"] = row.measure;
        x["eta"] = row.eta;
        x["kappa"] = row.kappa;
        x["p_minus"] = row.p_minus;
        x["p_plus"] = row.p_plus;
        x["q_minus"] = row.q_minus;
        x["q_plus"] = row.q_plus;
        x["value"] = row.value;
        rows.push_back(x);
    }
    j["rows"] = rows;
    return j;
}

inline Json to_json(const EmbeddingScanReport& r) {
    Json j;
    j["family"] = r.family;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json x;
        x["id"] = row.id;
        x["norm_psi"] = row.norm_psi;
        x["norm_w1phi"] = row.norm_w1phi;
        x["ratio"] = row.ratio;
        rows.push_back(x);
    }
    j["tests"] = rows;
    j["sup_ratio"] = r.sup_ratio;
    return j;
}

// ---------------------------------------------------------------------------
// Flat CSV tables for external plotting.
// ---------------------------------------------------------------------------

using CsvRow = std::vector<std::string>;

inline std::string csv_num(double v) { return format_double(v); }

inline void write_csv(const std::string& dir, const std::string& name,
                      const CsvRow& header, const std::vector<CsvRow>& rows) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    if (!out) throw std::runtime_error("write_csv: cannot open " + dir + "/" + name);
    auto emit = [&out](const CsvRow& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            out << r[i];
        }
        out << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
}

}  // namespace muso
