#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "metric.hpp"
#include "operators.hpp"
#include "quadrature.hpp"

namespace thullen::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

/// 17 significant digits in scientific notation: enough to round-trip a double.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << "\r\n";
}

inline json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json point_json(const Point& p) { return json::array({p.z1.real(), p.z1.imag(), p.z2.real(), p.z2.imag()}); }

inline Point point_from_json(const json& j) {
    return {{j.at(0).get<double>(), j.at(1).get<double>()}, {j.at(2).get<double>(), j.at(3).get<double>()}};
}

inline json levels_json(const Levels& l) {
    return {{"n_r1", l.n_r1}, {"n_theta1", l.n_theta1}, {"n_r2", l.n_r2},
            {"n_theta2", l.n_theta2}, {"grading_r1", l.grading_r1}, {"grading_r2", l.grading_r2}};
}

inline Levels levels_from_json(const json& j) {
    return {j.at("n_r1").get<int>(), j.at("n_theta1").get<int>(), j.at("n_r2").get<int>(),
            j.at("n_theta2").get<int>(), j.at("grading_r1").get<int>(), j.at("grading_r2").get<int>()};
}

inline void check_version(const json& j, const char* what) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != schema_version)
        throw PreconditionError(std::string(what) + " document has an unsupported schema_version");
}

/// Rule descriptor with explicit nodes and weights.
inline json rule_to_json(const QuadratureRule& r) {
    json nodes = json::array(), weights = json::array();
    for (const Point& p : r.nodes) nodes.push_back(point_json(p));
    for (double w : r.weights) weights.push_back(w);
    return {{"schema_version", schema_version}, {"type", "quadrature_rule"}, {"kind", to_string(r.kind)},
            {"alpha", r.alpha}, {"focus", complex_json(r.focus)}, {"levels", levels_json(r.levels)},
            {"nodes", nodes}, {"weights", weights}};
}

/// Rebuilds the rule from its descriptor and checks the stored nodes and weights against it.
inline QuadratureRule rule_from_json(const json& j) {
    check_version(j, "rule");
    const DomainParam p(j.at("alpha").get<double>());
    const Levels lv = levels_from_json(j.at("levels"));
    const std::string kind = j.at("kind").get<std::string>();
    QuadratureRule r;
    if (kind == "polydisc")
        r = build_rule(p, lv);
    else if (kind == "focused")
        r = build_focused_rule(p, lv, complex_from_json(j.at("focus")));
    else if (kind == "focused-w2")
        r = build_focused_rule_w2(p, lv, complex_from_json(j.at("focus")));
    else
        throw PreconditionError("unknown rule kind '" + kind + "'");
    const json& nodes = j.at("nodes");
    const json& weights = j.at("weights");
    if (nodes.size() != r.size() || weights.size() != r.size())
        throw PreconditionError("rule document is inconsistent with its levels");
    for (std::size_t i = 0; i < r.size(); ++i) {
        r.nodes[i] = point_from_json(nodes[i]);
        r.weights[i] = weights[i].get<double>();
    }
    return r;
}

inline json covering_to_json(const Covering& c, const SampleDescriptor& s, const CoveringStats* stats = nullptr) {
    json centers = json::array();
    for (std::size_t x : c.centers) centers.push_back(x);
    json j = {{"schema_version", schema_version},
              {"type", "covering"},
              {"alpha", c.alpha},
              {"r", c.r},
              {"sample", {{"generator", "halton-hyperbolic"}, {"density", s.density},
                          {"boundary_refinement", s.boundary_refinement}}},
              {"centers", centers},
              {"assignment", c.owner}};
    if (stats)
        j["stats"] = {{"n_cells", stats->n_cells}, {"N_obs", stats->max_overlap}, {"diam_obs", stats->max_diameter}};
    return j;
}

/// Reassembles a covering from its document; the sample is regenerated from the descriptor.
inline Covering covering_from_json(const json& j, std::vector<Point>* sample_out = nullptr) {
    check_version(j, "covering");
    const SampleDescriptor s{j.at("alpha").get<double>(), j.at("sample").at("density").get<int>(),
                             j.at("sample").at("boundary_refinement").get<double>()};
    const std::vector<Point> sample = sample_domain(s);
    Covering c = build_covering(sample, j.at("r").get<double>(), DomainParam(s.alpha));
    if (c.owner != j.at("assignment").get<std::vector<std::size_t>>())
        throw PreconditionError("covering document does not reproduce from its sample descriptor");
    if (sample_out) *sample_out = sample;
    return c;
}

/// Row-major dump in the documented basis order.
inline json operator_to_json(const TruncatedOperator& T) {
    json re = json::array(), im = json::array(), index = json::array();
    for (Eigen::Index r = 0; r < T.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < T.matrix.cols(); ++c) {
            re.push_back(T.matrix(r, c).real());
            im.push_back(T.matrix(r, c).imag());
        }
    for (int k = 0; k < T.basis.size(); ++k) {
        const BasisIndex b = T.basis.unindex(static_cast<std::size_t>(k));
        index.push_back(json::array({b.m, b.n}));
    }
    return {{"schema_version", schema_version}, {"type", "truncated_operator"}, {"alpha", T.alpha()},
            {"M", T.order()}, {"symbol", T.symbol}, {"basis_order", "row-major (m, n), index = m (M+1) + n"},
            {"basis", index}, {"real", re}, {"imag", im}};
}

inline void write_profile_csv(std::ostream& os, const BoundaryProfile& prof) {
    write_csv_row(os, {"symbol", "t", "z1_re", "z1_im", "z2_re", "z2_im", "d", "norm", "berezin_re", "berezin_im",
                       "defect", "trusted"});
    for (const auto& e : prof.entries) {
        write_csv_row(os, {prof.symbol, fmt(e.t), fmt(e.z.z1.real()), fmt(e.z.z1.imag()), fmt(e.z.z2.real()),
                           fmt(e.z.z2.imag()), fmt(e.d), fmt(e.norm), fmt(e.berezin.real()), fmt(e.berezin.imag()),
                           fmt(e.defect), e.trusted ? "1" : "0"});
    }
}

} // namespace thullen::io
