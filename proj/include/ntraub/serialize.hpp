#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ntraub/averages.hpp"
#include "ntraub/bounds.hpp"
#include "ntraub/errors.hpp"
#include "ntraub/problems.hpp"
#include "ntraub/radii.hpp"
#include "ntraub/solver.hpp"

namespace ntraub {

using nlohmann::json;

inline json avg_to_json(const AverageFunction& f) {
    switch (f.kind()) {
        case AverageKind::Constant: return {{"kind", "constant"}, {"k", f.param1()}};
        case AverageKind::Affine:
            return {{"kind", "affine"}, {"gamma", f.param1()}, {"slope", f.param2()}};
        case AverageKind::Power: return {{"kind", "power"}, {"c", f.param1()}, {"a", f.param2()}};
        case AverageKind::Rational:
            return {{"kind", "rational"}, {"gamma", f.param1()}, {"c0", f.param2()}};
        case AverageKind::Callback:
            throw DomainError("callback averages are not serializable");
    }
    throw DomainError("avg_to_json: bad kind");
}

inline AverageFunction avg_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return AverageFunction::constant(j.at("k").get<double>());
    if (kind == "affine")
        return AverageFunction::affine(j.at("gamma").get<double>(),
                                       j.at("slope").get<double>());
    if (kind == "power")
        return AverageFunction::power(j.at("c").get<double>(), j.at("a").get<double>());
    if (kind == "rational")
        return AverageFunction::rational(j.at("gamma").get<double>(),
                                         j.at("c0").get<double>());
    throw DomainError("avg_from_json: unknown kind '" + kind + "'");
}

inline json model_to_json(const LipschitzModel& m) {
    json j{{"kappa", avg_to_json(m.radius_avg)},
           {"kappa0", avg_to_json(m.center_avg)},
           {"kappa_nondecreasing", m.radius_nondecreasing},
           {"kappa0_nondecreasing", m.center_nondecreasing}};
    if (m.refined_avg) j["kappa_bar"] = avg_to_json(*m.refined_avg);
    return j;
}

inline LipschitzModel model_from_json(const json& j) {
    std::optional<AverageFunction> refined;
    if (j.contains("kappa_bar")) refined = avg_from_json(j.at("kappa_bar"));
    return make_model(avg_from_json(j.at("kappa")), avg_from_json(j.at("kappa0")),
                      std::move(refined), j.value("kappa_nondecreasing", true),
                      j.value("kappa0_nondecreasing", true));
}

inline json radius_result_to_json(const RadiusResult& r) {
    return {{"delta", r.delta},
            {"lhs", r.condition_lhs_at_delta},
            {"theorem", to_string(r.theorem)},
            {"method", to_string(r.method)},
            {"clamped", r.clamped}};
}

inline json constants_report_to_json(const ConstantsReport& r) {
    json flags = json::array();
    if (r.degenerate) flags.push_back("converged-degenerate");
    if (r.vacuous_e) flags.push_back("vacuous-E");
    if (r.vacuous_f) flags.push_back("vacuous-F");
    return {{"c", {r.c[0], r.c[1], r.c[2]}},
            {"q", {r.q[0], r.q[1], r.q[2]}},
            {"E", r.e},
            {"E_printed", r.e_printed},
            {"F", r.f},
            {"variant", to_string(r.variant)},
            {"flags", flags}};
}

inline json validation_report_to_json(const ValidationReport& r) {
    return {{"samples", r.samples},
            {"radius_violations", r.radius_violations},
            {"radius_max_ratio", r.radius_max_ratio},
            {"center_violations", r.center_violations},
            {"center_max_ratio", r.center_max_ratio},
            {"ball_radius", r.ball_radius},
            {"seed", r.seed}};
}

namespace detail {

/// Shortest round-trippable decimal form; deterministic across runs.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Per-iteration bound columns for trace output; values may be empty.
struct TraceBounds {
    std::vector<double> linear;
    std::vector<double> order5;
};

/// CSV with columns t,res_norm,err_x,err_y,err_z,bound_linear,bound_order5.
/// Bound columns index from t = 1 (bounds are for iterates after the start).
inline void write_trace_csv(std::ostream& os, const IterationTrace& trace,
                            const TraceBounds& bounds = {}) {
    os << "t,res_norm,err_x,err_y,err_z,bound_linear,bound_order5\n";
    for (std::size_t t = 0; t < trace.records.size(); ++t) {
        const TraceRecord& r = trace.records[t];
        os << t << ',' << detail::fmt_double(r.res_norm) << ',';
        if (r.err_x) os << detail::fmt_double(*r.err_x);
        os << ',';
        if (r.err_y) os << detail::fmt_double(*r.err_y);
        os << ',';
        if (r.err_z) os << detail::fmt_double(*r.err_z);
        os << ',';
        if (t >= 1 && t - 1 < bounds.linear.size())
            os << detail::fmt_double(bounds.linear[t - 1]);
        os << ',';
        if (t >= 1 && t - 1 < bounds.order5.size())
            os << detail::fmt_double(bounds.order5[t - 1]);
        os << '\n';
    }
}

inline json trace_record_to_json(std::size_t t, const TraceRecord& r) {
    json j{{"t", t}, {"res_norm", r.res_norm}, {"x", r.x}};
    if (!r.y.empty()) j["y"] = r.y;
    if (!r.z.empty()) j["z"] = r.z;
    if (r.err_x) j["err_x"] = *r.err_x;
    if (r.err_y) j["err_y"] = *r.err_y;
    if (r.err_z) j["err_z"] = *r.err_z;
    return j;
}

/// JSON lines, one record per outer iteration.
inline void write_trace_jsonl(std::ostream& os, const IterationTrace& trace) {
    for (std::size_t t = 0; t < trace.records.size(); ++t) {
        os << trace_record_to_json(t, trace.records[t]).dump() << '\n';
    }
}

inline json trace_summary_to_json(const IterationTrace& trace) {
    json j{{"status", to_string(trace.status)},
           {"outer_iterations", trace.outer_iterations},
           {"final_res_norm", trace.records.empty() ? 0.0 : trace.records.back().res_norm}};
    if (!trace.note.empty()) j["note"] = trace.note;
    if (!trace.records.empty() && trace.records.back().err_x)
        j["final_err"] = *trace.records.back().err_x;
    return j;
}

}  // namespace ntraub
