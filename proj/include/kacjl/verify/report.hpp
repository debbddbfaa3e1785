#pragma once

// JSON and CSV renderings of verification reports. Seeds are decimal strings;
// nothing time-dependent is written, so reruns are byte-identical.

#include <cstdio>
#include <string>
#include <vector>

#include "kacjl/io.hpp"
#include "kacjl/verify/coupling.hpp"
#include "kacjl/verify/jl.hpp"
#include "kacjl/verify/moments.hpp"
#include "kacjl/verify/rip.hpp"
#include "kacjl/verify/symmetry.hpp"

namespace kacjl::verify {

using kacjl::json;

namespace detail {
inline std::string seed_str(std::uint64_t s) { return std::to_string(s); }

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline json to_json(const ContractionReport& r) {
  json series = json::array();
  for (const auto& p : r.series)
    series.push_back({{"t", p.t},
                      {"mean", p.mean},
                      {"std_error", p.std_error},
                      {"envelope", p.envelope},
                      {"step_ratio", p.step_ratio},
                      {"step_ratio_se", p.step_ratio_se}});
  return {{"experiment", "contraction"},
          {"parameters",
           {{"d", r.d}, {"t_max", r.t_max}, {"trials", r.trials}, {"seed", detail::seed_str(r.seed)}}},
          {"estimates", {{"ratio", r.ratio}, {"ratio_se", r.ratio_se}, {"ratio_z", r.ratio_z}}},
          {"bounds", {{"exact_factor", r.exact_factor}, {"envelope", "2 exp(-t/(2d))"}}},
          {"pass", {{"ratio", r.ratio_pass}, {"envelope", r.envelope_pass}, {"all", r.pass()}}},
          {"series", series}};
}

inline std::string to_csv(const ContractionReport& r) {
  std::string out = "t,mean,std_error,envelope,step_ratio,step_ratio_se\n";
  for (const auto& p : r.series)
    out += std::to_string(p.t) + "," + detail::num(p.mean) + "," + detail::num(p.std_error) + "," +
           detail::num(p.envelope) + "," + detail::num(p.step_ratio) + "," +
           detail::num(p.step_ratio_se) + "\n";
  return out;
}

inline json to_json(const MomentStats& m) {
  return {{"experiment", "moments"},
          {"parameters",
           {{"d", m.d}, {"p", m.p}, {"t", m.t}, {"trials", m.trials}, {"seed", detail::seed_str(m.seed)}}},
          {"estimates", {{"estimate", m.estimate}, {"std_error", m.std_error}}},
          {"bounds", {{"bound", m.bound}}},
          {"hypothesis_ok", m.hypothesis_ok},
          {"warning", m.hypothesis_ok ? "" : "d < 25: moment bound hypothesis violated"},
          {"pass", m.pass}};
}

inline json to_json(const MaxCoordReport& r) {
  return {{"experiment", "maxcoord"},
          {"parameters",
           {{"d", r.d}, {"t", r.t}, {"trials", r.trials}, {"seed", detail::seed_str(r.seed)}}},
          {"estimates", {{"violations", r.violations}, {"frequency", r.frequency}}},
          {"bounds", {{"threshold", r.threshold}, {"reference", r.reference}}},
          {"vacuous", r.vacuous},
          {"note", r.vacuous ? "threshold exceeds 1: no unit vector can violate it, check is vacuous" : ""},
          {"tolerance", r.tolerance},
          {"pass", r.pass()}};
}

inline json to_json(const SubsetConcentrationReport& r) {
  return {{"experiment", "subset"},
          {"parameters",
           {{"d", r.d},
            {"n", r.n},
            {"epsilon", r.epsilon},
            {"k", r.k},
            {"t", r.t},
            {"trials", r.trials},
            {"seed", detail::seed_str(r.seed)}}},
          {"estimates", {{"failures", r.failures}, {"frequency", r.frequency}}},
          {"bounds", {{"reference", r.reference}}},
          {"tolerance", r.tolerance},
          {"pass", r.pass()}};
}

inline json to_json(const RipReport& r) {
  return {{"report", "rip"},
          {"s", r.s},
          {"m", r.m},
          {"d", r.d},
          {"delta_s", r.delta_s},
          {"lambda_max", r.lambda_max},
          {"lambda_min", r.lambda_min},
          {"supports", r.supports},
          {"method", r.method}};
}

inline json to_json(const DirksenReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"m", row.m}, {"median_delta", row.median_delta}, {"deltas", row.deltas},
                    {"rows_kept", row.rows_kept}});
  return {{"experiment", "dirksen"},
          {"parameters",
           {{"d", r.d}, {"s", r.s}, {"T", r.T}, {"trials", r.trials}, {"seed", detail::seed_str(r.seed)}}},
          {"estimates", {{"median_K", r.median_K}}},
          {"rows", rows},
          {"pass", r.monotone}};
}

inline std::string to_csv(const DirksenReport& r) {
  std::string out = "m,median_delta_s,trials\n";
  for (const auto& row : r.rows)
    out += std::to_string(row.m) + "," + detail::num(row.median_delta) + "," +
           std::to_string(row.deltas.size()) + "\n";
  return out;
}

inline json to_json(const KrahmerWardReport& r) {
  return {{"experiment", "krahmerward"},
          {"parameters",
           {{"m", r.m},
            {"d", r.d},
            {"s", r.s},
            {"n", r.n},
            {"epsilon", r.epsilon},
            {"eta", r.eta},
            {"trials", r.trials},
            {"seed", detail::seed_str(r.seed)}}},
          {"estimates", {{"delta_s", r.delta_s}, {"passes", r.passes}, {"pass_rate", r.pass_rate}}},
          {"bounds", {{"target_rate", 1.0 - r.eta}, {"s_required", r.s_required}}},
          {"precondition_met", r.precondition_met},
          {"mode", r.mode},
          {"note", r.note},
          {"pass", r.pass_rate >= 1.0 - r.eta}};
}

inline json to_json(const DistortionReport& r) {
  return {{"report", "distortion"},
          {"epsilon", r.epsilon},
          {"max_abs_distortion", r.max_abs_distortion},
          {"pass", r.pass},
          {"excluded", r.excluded},
          {"note", r.note},
          {"per_point_ratio", r.per_point_ratio}};
}

inline json to_json(const SymmetryReport& r) {
  json reps = json::array();
  for (const auto& rep : r.repetitions) reps.push_back({{"p_values", rep.p_values}, {"min_p", rep.min_p}});
  return {{"experiment", "symmetry"},
          {"parameters",
           {{"d", r.d},
            {"T", r.T},
            {"kind", std::string(to_string(r.kind))},
            {"samples", r.samples},
            {"permutations", r.permutations},
            {"alpha", r.alpha},
            {"seed", detail::seed_str(r.seed)}}},
          {"statistics", r.statistics},
          {"repetitions", reps},
          {"estimates", {{"indistinguishable", r.indistinguishable}, {"detected", r.detected}}}};
}

inline json to_json(const PermMixingReport& r) {
  return {{"experiment", "permtv"},
          {"parameters",
           {{"d", r.d}, {"T", r.T}, {"trials", r.trials}, {"seed", detail::seed_str(r.seed)}}},
          {"estimates", {{"tv", r.tv}, {"tv_se", r.tv_se}, {"bias_scale", r.bias_scale}}},
          {"bounds", {{"bound", r.bound}, {"bound_constant", r.bound_constant}}},
          {"trials_sufficient", r.trials_sufficient},
          {"note", "plug-in TV is biased upward by O(sqrt(d!/trials)); not corrected"}};
}

inline json to_json(const PermMixingSeries& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  return {{"experiment", "permtv_series"},
          {"max_tv", s.max_tv},
          {"decreasing", s.decreasing},
          {"final_ok", s.final_ok},
          {"pass", s.pass()},
          {"series", pts}};
}

inline std::string to_csv(const PermMixingSeries& series) {
  std::string out = "d,T,trials,tv,tv_se,bias_scale,bound\n";
  for (const auto& r : series.points)
    out += std::to_string(r.d) + "," + std::to_string(r.T) + "," + std::to_string(r.trials) + "," +
           detail::num(r.tv) + "," + detail::num(r.tv_se) + "," + detail::num(r.bias_scale) + "," +
           detail::num(r.bound) + "\n";
  return out;
}

}  // namespace kacjl::verify
