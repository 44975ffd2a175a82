#ifndef PERIMETRIC_JSON_IO_HPP
#define PERIMETRIC_JSON_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "perimetric/classifier.hpp"
#include "perimetric/gallery.hpp"
#include "perimetric/metric_space.hpp"
#include "perimetric/solver.hpp"

namespace perimetric {

using nlohmann::json;

// Raised on the first instance-schema violation; the message names it.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct InstanceDocument {
  FiniteMetricSpace space;
  std::optional<SelfMap> map;
  json meta;
};

// Expected shape:
//   { "labels": [n distinct strings, n >= 3],
//     "dist":   [n rows of n numbers],
//     "map":    [n indices into labels]   (optional)
//     "meta":   anything                  (optional) }
inline InstanceDocument parse_instance(const json& doc) {
  if (!doc.is_object()) throw SchemaError("instance document must be a JSON object");
  if (!doc.contains("labels")) throw SchemaError("missing required key 'labels'");
  if (!doc.contains("dist")) throw SchemaError("missing required key 'dist'");

  const json& jlabels = doc["labels"];
  if (!jlabels.is_array()) throw SchemaError("'labels' must be an array");
  const std::size_t n = jlabels.size();
  if (n < 3) throw SchemaError("'labels' needs at least 3 entries, got " + std::to_string(n));

  std::vector<std::string> labels;
  labels.reserve(n);
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!jlabels[i].is_string())
      throw SchemaError("labels[" + std::to_string(i) + "] must be a string");
    std::string s = jlabels[i].get<std::string>();
    if (!seen.insert(s).second)
      throw SchemaError("labels[" + std::to_string(i) + "] duplicates '" + s + "'");
    labels.push_back(std::move(s));
  }

  const json& jdist = doc["dist"];
  if (!jdist.is_array() || jdist.size() != n)
    throw SchemaError("'dist' must be an array of " + std::to_string(n) + " rows");
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = jdist[i];
    if (!row.is_array() || row.size() != n)
      throw SchemaError("dist[" + std::to_string(i) + "] must be an array of " +
                        std::to_string(n) + " numbers");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number())
        throw SchemaError("dist[" + std::to_string(i) + "][" + std::to_string(j) +
                          "] must be a number");
      flat.push_back(row[j].get<double>());
    }
  }

  std::optional<SelfMap> map;
  if (doc.contains("map") && !doc["map"].is_null()) {
    const json& jmap = doc["map"];
    if (!jmap.is_array() || jmap.size() != n)
      throw SchemaError("'map' must be an array of " + std::to_string(n) + " indices");
    std::vector<int> image;
    image.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!jmap[i].is_number_integer())
        throw SchemaError("map[" + std::to_string(i) + "] must be an integer");
      const long long v = jmap[i].get<long long>();
      if (v < 0 || v >= static_cast<long long>(n))
        throw SchemaError("map[" + std::to_string(i) + "] = " + std::to_string(v) +
                          " is outside [0, " + std::to_string(n) + ")");
      image.push_back(static_cast<int>(v));
    }
    map.emplace(std::move(image), static_cast<int>(n));
  }

  json meta = doc.contains("meta") ? doc["meta"] : json(nullptr);

  FiniteMetricSpace space(std::move(labels), std::move(flat));
  return {std::move(space), std::move(map), std::move(meta)};
}

inline json instance_to_json(const FiniteMetricSpace& space, const SelfMap* map = nullptr,
                             json meta = json(nullptr)) {
  json doc;
  doc["labels"] = space.labels();
  json rows = json::array();
  for (int i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < space.size(); ++j) row.push_back(space.dist(i, j));
    rows.push_back(std::move(row));
  }
  doc["dist"] = std::move(rows);
  if (map) doc["map"] = map->image();
  if (!meta.is_null()) doc["meta"] = std::move(meta);
  return doc;
}

// ---------------------------------------------------------------------------
// Report serialization. Point indices are rendered as labels.
// ---------------------------------------------------------------------------

namespace detail {

inline json labels_for(const FiniteMetricSpace& space, const std::vector<int>& idx) {
  json arr = json::array();
  for (int i : idx) arr.push_back(space.label(i));
  return arr;
}

}  // namespace detail

inline json to_json(const FiniteMetricSpace& space, const MetricValidationReport& report) {
  json violations = json::array();
  for (const MetricViolation& v : report.violations) {
    std::vector<int> where;
    for (int w : v.where)
      if (w >= 0) where.push_back(w);
    violations.push_back({{"axiom", to_string(v.axiom)},
                          {"points", detail::labels_for(space, where)},
                          {"slack", v.slack}});
  }
  return {{"ok", report.ok}, {"tol", report.tol}, {"violations", std::move(violations)}};
}

inline json to_json(const FiniteMetricSpace& space, const ModulusReport& report) {
  return {{"modulus", report.modulus},
          {"witness", detail::labels_for(space, report.witness)},
          {"evaluated_count", report.evaluated_count},
          {"strict_margin", report.strict_margin},
          {"marginal", report.marginal}};
}

inline json to_json(const FiniteMetricSpace& space, const StrictCheck& check) {
  return {{"holds", check.holds},
          {"witness", detail::labels_for(space, check.witness)},
          {"slack", check.slack},
          {"marginal", check.marginal},
          {"evaluated_count", check.evaluated_count}};
}

inline json to_json(const FiniteMetricSpace& space, const ClassificationReport& report) {
  json out{{"banach", to_json(space, report.banach)},
           {"perimeter", to_json(space, report.perimeter)},
           {"edelstein_contractive", to_json(space, report.edelstein_contractive)},
           {"edelstein_perimeter", to_json(space, report.edelstein_perimeter)},
           {"period2_points", detail::labels_for(space, report.period2_points)},
           {"fixed_points", detail::labels_for(space, report.fixed_points)}};
  if (report.fg) {
    out["fg"] = to_json(space, *report.fg);
    out["fg"]["f"] = report.f_spec;
    out["fg"]["g"] = report.g_spec;
  }
  return out;
}

inline json to_json(const FiniteMetricSpace& space, const OrbitTrace& trace) {
  json out{{"points", detail::labels_for(space, trace.points)},
           {"step_dists", trace.step_dists},
           {"perimeters", trace.perimeters},
           {"termination", to_string(trace.termination)}};
  if (trace.cycle_period > 0) out["cycle_period"] = trace.cycle_period;
  if (trace.f_values) out["f_values"] = *trace.f_values;
  if (trace.g_values) out["g_values"] = *trace.g_values;
  return out;
}

inline json to_json(const FiniteMetricSpace& space, const FixedPointResult& result) {
  json out{{"status", to_string(result.status)},
           {"steps", result.steps},
           {"certified_bounds", result.certified_bounds},
           {"perimeter_modulus", result.modulus}};
  out["fixed_point"] = result.fixed_point ? json(space.label(*result.fixed_point)) : json(nullptr);
  out["p0"] = result.p0 ? json(*result.p0) : json(nullptr);
  return out;
}

inline json to_json(const ConditionVerdict& v) {
  return {{"ok", v.ok}, {"witness", v.witness}, {"lhs", v.lhs}, {"rhs", v.rhs}};
}

inline json to_json(const AdmissibilityReport& report) {
  json out{{"symmetric", to_json(report.symmetric)},
           {"g_dominates_argument", to_json(report.g_dominates_argument)},
           {"f_dominates_g", to_json(report.f_dominates_g)},
           {"g_vanishes_at_origin", to_json(report.g_vanishes_at_origin)},
           {"g_monotone", to_json(report.g_monotone)},
           {"admissible", report.admissible}};
  if (report.condition_K) {
    out["condition_K"] = to_json(*report.condition_K);
    out["condition_K"]["K"] = *report.K;
  }
  if (report.condition_k0) {
    out["condition_k0"] = to_json(*report.condition_k0);
    out["condition_k0"]["k0"] = *report.k0;
  }
  return out;
}

inline json to_json(const FiniteMetricSpace& space, const Figure1Claims& claims) {
  return {{"depth", claims.config.depth},
          {"epsilon", claims.config.epsilon},
          {"validation", to_json(space, claims.validation)},
          {"banach_off_patch", to_json(space, claims.banach_off_patch)},
          {"banach_modulus_is_one", claims.banach_modulus_is_one},
          {"banach_witness_even_pair", claims.banach_witness_even_pair},
          {"perimeter_interior", to_json(space, claims.perimeter_interior)},
          {"ratio_lower_bound", claims.ratio_lower_bound},
          {"perimeter_within_bounds", claims.perimeter_within_bounds},
          {"edelstein_perimeter_interior", to_json(space, claims.edelstein_perimeter_interior)},
          {"interior_point_count", claims.interior_point_count},
          {"excluded_triple_count", claims.excluded_triple_count},
          {"ok", claims.ok}};
}

inline json to_json(const FiniteMetricSpace& space, const ThreePointClaims& claims) {
  return {{"classification", to_json(space, claims.classification)},
          {"perimeter_strictly_decreases", claims.perimeter_strictly_decreases},
          {"not_contractive", claims.not_contractive},
          {"two_fixed_points", claims.two_fixed_points},
          {"banach_modulus_is_one", claims.banach_modulus_is_one},
          {"perimeter_modulus_two_thirds", claims.perimeter_modulus_two_thirds},
          {"ok", claims.ok}};
}

}  // namespace perimetric

#endif  // PERIMETRIC_JSON_IO_HPP
