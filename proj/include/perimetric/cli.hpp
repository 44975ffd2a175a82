#ifndef PERIMETRIC_CLI_HPP
#define PERIMETRIC_CLI_HPP

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "perimetric/aggregators.hpp"
#include "perimetric/classifier.hpp"
#include "perimetric/gallery.hpp"
#include "perimetric/json_io.hpp"
#include "perimetric/metric_space.hpp"
#include "perimetric/solver.hpp"

namespace perimetric {
namespace cli {

enum class Command { Validate, Classify, Solve, Gallery };
enum class OutputFormat { Text, Json };

// Exit codes: 0 clean, 1 mathematical violation (broken axioms, failed
// claims, no convergence), 2 input error (bad files, schema violations,
// malformed flags or specs).
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;

struct RunConfig {
  Command command = Command::Validate;
  std::string input_path;
  std::string gallery_name;
  std::string f_spec, g_spec;    // both or neither
  double tol = -1.0;             // < 0: per-command default
  int max_steps = 1000;
  std::string start_label;       // empty: first point
  int n = 20;                    // gallery size / truncation depth
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  unsigned threads = 0;          // 0: hardware
  OutputFormat format = OutputFormat::Text;
  std::string export_path;       // gallery only: write the instance as JSON
};

struct RunResult {
  int exit_code = kExitOk;
  json report;
  std::string text;
};

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string join_labels(const json& arr) {
  std::string out;
  for (const auto& v : arr) {
    if (!out.empty()) out += ", ";
    out += v.get<std::string>();
  }
  return out.empty() ? "(none)" : out;
}

inline json label_array(const FiniteMetricSpace& space, const std::vector<int>& idx) {
  json arr = json::array();
  for (int i : idx) arr.push_back(space.label(i));
  return arr;
}

inline InstanceDocument load_instance(const std::string& path) {
  if (path.empty()) throw SchemaError("no input file given (use --input <path>)");
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open input file '" + path + "'");
  json doc;
  in >> doc;
  return parse_instance(doc);
}

inline void append_validation_text(std::ostringstream& out, const FiniteMetricSpace& space,
                                   const MetricValidationReport& report) {
  out << "metric validation: " << (report.ok ? "OK" : "FAILED") << " (tol " << num(report.tol)
      << ", " << report.violations.size() << " violation(s))\n";
  std::size_t shown = 0;
  for (const MetricViolation& v : report.violations) {
    if (shown == 10) {
      out << "  ... " << (report.violations.size() - shown) << " more\n";
      break;
    }
    out << "  " << to_string(v.axiom) << " at (" << space.label(v.where[0]) << ", "
        << space.label(v.where[1]);
    if (v.where[2] >= 0) out << ", " << space.label(v.where[2]);
    out << "): slack " << num(v.slack) << "\n";
    ++shown;
  }
}

inline void append_classification_text(std::ostringstream& out, const FiniteMetricSpace& space,
                                       const ClassificationReport& rep) {
  auto witness = [&](const std::vector<int>& w) {
    std::string s;
    for (int i : w) {
      if (!s.empty()) s += ", ";
      s += space.label(i);
    }
    return s.empty() ? std::string("-") : s;
  };
  out << "banach modulus:    " << num(rep.banach.modulus) << "  (witness " << witness(rep.banach.witness)
      << ")\n";
  out << "perimeter modulus: " << num(rep.perimeter.modulus) << "  (witness "
      << witness(rep.perimeter.witness) << ")\n";
  if (rep.fg)
    out << "fg modulus:        " << num(rep.fg->modulus) << "  (F=" << rep.f_spec << ", G=" << rep.g_spec
        << ", witness " << witness(rep.fg->witness) << ")\n";
  out << "edelstein contractive: " << (rep.edelstein_contractive.holds ? "yes" : "no") << "  (witness "
      << witness(rep.edelstein_contractive.witness) << ", slack "
      << num(rep.edelstein_contractive.slack)
      << (rep.edelstein_contractive.marginal ? ", marginal" : "") << ")\n";
  out << "edelstein perimeter:   " << (rep.edelstein_perimeter.holds ? "yes" : "no") << "  (witness "
      << witness(rep.edelstein_perimeter.witness) << ", slack " << num(rep.edelstein_perimeter.slack)
      << (rep.edelstein_perimeter.marginal ? ", marginal" : "") << ")\n";
  auto name_list = [&](const std::vector<int>& idx) {
    std::string s;
    for (int i : idx) {
      if (!s.empty()) s += " ";
      s += space.label(i);
    }
    return s.empty() ? std::string("(none)") : s;
  };
  out << "fixed points:   " << name_list(rep.fixed_points) << "\n";
  out << "period-2 points: " << name_list(rep.period2_points) << "\n";
}

inline std::pair<std::optional<std::pair<TripleAggregator, TripleAggregator>>, std::string>
parse_fg(const RunConfig& config) {
  if (config.f_spec.empty() != config.g_spec.empty())
    throw std::invalid_argument("--f and --g must be given together");
  if (config.f_spec.empty()) return {std::nullopt, ""};
  TripleAggregator F = parse_aggregator(config.f_spec);
  TripleAggregator G = parse_aggregator(config.g_spec);
  return {std::make_pair(std::move(F), std::move(G)), config.f_spec + "/" + config.g_spec};
}

inline RunResult run_validate(const RunConfig& config) {
  RunResult result;
  InstanceDocument doc = load_instance(config.input_path);
  const MetricValidationReport report = config.tol >= 0.0
                                            ? validate_metric(doc.space, config.tol)
                                            : validate_metric(doc.space);
  result.report = {{"command", "validate"},
                   {"n", doc.space.size()},
                   {"validation", to_json(doc.space, report)}};
  std::ostringstream text;
  text << "input: " << config.input_path << " (" << doc.space.size() << " points)\n";
  append_validation_text(text, doc.space, report);
  result.text = text.str();
  result.exit_code = report.ok ? kExitOk : kExitViolation;
  return result;
}

inline RunResult run_classify(const RunConfig& config) {
  RunResult result;
  InstanceDocument doc = load_instance(config.input_path);
  if (!doc.map) throw SchemaError("'map' is required for classify");
  const auto [fg, fg_desc] = parse_fg(config);

  const MetricValidationReport validation = config.tol >= 0.0
                                                ? validate_metric(doc.space, config.tol)
                                                : validate_metric(doc.space);
  std::ostringstream text;
  text << "input: " << config.input_path << " (" << doc.space.size() << " points)\n";
  if (!validation.ok) {
    append_validation_text(text, doc.space, validation);
    result.report = {{"command", "classify"}, {"validation", to_json(doc.space, validation)}};
    result.text = text.str();
    result.exit_code = kExitViolation;
    return result;
  }

  SweepOptions opts;
  opts.threads = config.threads;
  const ClassificationReport rep = classify(doc.space, *doc.map, fg, opts);
  result.report = {{"command", "classify"},
                   {"n", doc.space.size()},
                   {"classification", to_json(doc.space, rep)}};
  append_classification_text(text, doc.space, rep);
  result.text = text.str();
  result.exit_code = kExitOk;
  return result;
}

inline RunResult run_solve(const RunConfig& config) {
  RunResult result;
  InstanceDocument doc = load_instance(config.input_path);
  if (!doc.map) throw SchemaError("'map' is required for solve");
  if (config.max_steps < 1) throw std::invalid_argument("--max-steps must be at least 1");

  int start = 0;
  if (!config.start_label.empty()) {
    const auto idx = doc.space.index_of(config.start_label);
    if (!idx) throw SchemaError("start label '" + config.start_label + "' not found");
    start = *idx;
  }

  const MetricValidationReport validation = validate_metric(doc.space);
  std::ostringstream text;
  text << "input: " << config.input_path << " (" << doc.space.size() << " points)\n";
  if (!validation.ok) {
    append_validation_text(text, doc.space, validation);
    result.report = {{"command", "solve"}, {"validation", to_json(doc.space, validation)}};
    result.text = text.str();
    result.exit_code = kExitViolation;
    return result;
  }

  SweepOptions opts;
  opts.threads = config.threads;
  const double tol = config.tol >= 0.0 ? config.tol : 0.0;
  const OrbitTrace trace = picard_orbit(doc.space, *doc.map, start, config.max_steps);
  const FixedPointResult fp = solve_fixed_point(doc.space, *doc.map, start, tol,
                                                config.max_steps, opts);
  const std::vector<int> period2 = find_period2_points(doc.space, *doc.map);

  result.report = {{"command", "solve"},
                   {"start", doc.space.label(start)},
                   {"orbit", to_json(doc.space, trace)},
                   {"result", to_json(doc.space, fp)},
                   {"period2_points", label_array(doc.space, period2)}};

  text << "orbit:";
  for (int p : trace.points) text << " " << doc.space.label(p);
  text << "  [" << to_string(trace.termination) << "]\n";
  text << "status: " << to_string(fp.status) << " after " << fp.steps << " step(s)";
  if (fp.fixed_point) text << ", fixed point " << doc.space.label(*fp.fixed_point);
  text << "\n";
  text << "perimeter modulus " << num(fp.modulus);
  if (fp.p0) text << ", p0 " << num(*fp.p0);
  text << "\n";
  if (!fp.certified_bounds.empty()) {
    text << "certified bounds:";
    for (double b : fp.certified_bounds) text << " " << num(b);
    text << "\n";
  }
  if (!period2.empty()) {
    text << "period-2 points:";
    for (int p : period2) text << " " << doc.space.label(p);
    text << "\n";
  }
  result.text = text.str();
  result.exit_code = fp.status == SolveStatus::Converged ? kExitOk : kExitViolation;
  return result;
}

inline void export_instance(const RunConfig& config, const GalleryInstance& inst, json meta) {
  if (config.export_path.empty()) return;
  std::ofstream out(config.export_path);
  if (!out) throw SchemaError("cannot open export file '" + config.export_path + "'");
  out << instance_to_json(inst.space, &inst.map, std::move(meta)).dump(2) << "\n";
}

inline RunResult run_gallery(const RunConfig& config) {
  RunResult result;
  std::ostringstream text;
  SweepOptions opts;
  opts.threads = config.threads;

  if (config.gallery_name == "three_point") {
    const GalleryInstance inst = build_three_point_example();
    const ThreePointClaims claims = verify_three_point_claims(opts);
    export_instance(config, inst, {{"gallery", "three_point"}});
    result.report = {{"command", "gallery"},
                     {"name", "three_point"},
                     {"claims", to_json(inst.space, claims)}};
    text << "three-point example (3 points, unit distances)\n";
    append_classification_text(text, inst.space, claims.classification);
    text << "claims: perimeter strictly decreases " << (claims.perimeter_strictly_decreases ? "PASS" : "FAIL")
         << ", not contractive " << (claims.not_contractive ? "PASS" : "FAIL")
         << ", two fixed points " << (claims.two_fixed_points ? "PASS" : "FAIL")
         << ", banach modulus 1 " << (claims.banach_modulus_is_one ? "PASS" : "FAIL")
         << ", perimeter modulus 2/3 " << (claims.perimeter_modulus_two_thirds ? "PASS" : "FAIL") << "\n";
    text << "overall: " << (claims.ok ? "PASS" : "FAIL") << "\n";
    result.exit_code = claims.ok ? kExitOk : kExitViolation;
  } else if (config.gallery_name == "figure1") {
    GalleryConfig gc;
    gc.depth = config.n;
    gc.epsilon = config.epsilon;
    const GalleryInstance inst = build_figure1_space(gc);
    const Figure1Claims claims = verify_figure1_claims(gc, opts);
    export_instance(config, inst, {{"gallery", "figure1"}, {"depth", gc.depth}, {"epsilon", gc.epsilon}});
    result.report = {{"command", "gallery"},
                     {"name", "figure1"},
                     {"claims", to_json(inst.space, claims)}};
    text << "figure-1 truncation depth=" << gc.depth << " epsilon=" << num(gc.epsilon) << " ("
         << inst.space.size() << " points)\n";
    append_validation_text(text, inst.space, claims.validation);
    text << "claim A: banach modulus off patch = " << num(claims.banach_off_patch.modulus)
         << " witness (" << join_labels(label_array(inst.space, claims.banach_off_patch.witness))
         << "): " << ((claims.banach_modulus_is_one && claims.banach_witness_even_pair) ? "PASS" : "FAIL")
         << "\n";
    text << "claim B: interior perimeter modulus " << num(claims.perimeter_interior.modulus) << " in ["
         << num(claims.ratio_lower_bound) << ", 1): "
         << (claims.perimeter_within_bounds ? "PASS" : "FAIL") << "\n";
    text << "claim C: strict interior perimeter decrease ("
         << claims.edelstein_perimeter_interior.evaluated_count << " triples, "
         << claims.excluded_triple_count << " boundary triples excluded): "
         << (claims.edelstein_perimeter_interior.holds ? "PASS" : "FAIL") << "\n";
    text << "overall: " << (claims.ok ? "PASS" : "FAIL") << "\n";
    result.exit_code = claims.ok ? kExitOk : kExitViolation;
  } else if (config.gallery_name == "random") {
    const GalleryInstance inst = random_instance(config.n, config.seed);
    const MetricValidationReport validation = validate_metric(inst.space, 0.0);
    const ClassificationReport rep = classify(inst.space, inst.map, std::nullopt, opts);
    export_instance(config, inst,
                    {{"gallery", "random"}, {"n", config.n}, {"seed", config.seed}});
    result.report = {{"command", "gallery"},
                     {"name", "random"},
                     {"n", config.n},
                     {"seed", config.seed},
                     {"validation", to_json(inst.space, validation)},
                     {"classification", to_json(inst.space, rep)}};
    text << "random instance n=" << config.n << " seed=" << config.seed << "\n";
    append_validation_text(text, inst.space, validation);
    append_classification_text(text, inst.space, rep);
    result.exit_code = validation.ok ? kExitOk : kExitViolation;
  } else {
    throw std::invalid_argument("unknown gallery name '" + config.gallery_name +
                                "' (expected three_point, figure1, or random)");
  }
  result.text = text.str();
  return result;
}

}  // namespace detail

// Dispatch a fully parsed configuration. Never throws: failures are mapped
// onto the documented exit codes with the message in both report and text.
inline RunResult run(const RunConfig& config) {
  try {
    switch (config.command) {
      case Command::Validate: return detail::run_validate(config);
      case Command::Classify: return detail::run_classify(config);
      case Command::Solve: return detail::run_solve(config);
      case Command::Gallery: return detail::run_gallery(config);
    }
    throw std::logic_error("unreachable command");
  } catch (const SchemaError& e) {
    return {kExitInputError, {{"error", e.what()}}, std::string("error: ") + e.what() + "\n"};
  } catch (const json::exception& e) {
    return {kExitInputError, {{"error", e.what()}}, std::string("error: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    return {kExitInputError, {{"error", e.what()}}, std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kExitViolation, {{"error", e.what()}}, std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace cli
}  // namespace perimetric

#endif  // PERIMETRIC_CLI_HPP
