#ifndef PERIMETRIC_SOLVER_HPP
#define PERIMETRIC_SOLVER_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "perimetric/aggregators.hpp"
#include "perimetric/classifier.hpp"
#include "perimetric/detail/numeric.hpp"
#include "perimetric/metric_space.hpp"

namespace perimetric {

enum class OrbitTermination { FixedPointHit, CycleDetected, MaxStepsReached };

inline const char* to_string(OrbitTermination t) {
  switch (t) {
    case OrbitTermination::FixedPointHit: return "fixed-point-hit";
    case OrbitTermination::CycleDetected: return "cycle-detected";
    case OrbitTermination::MaxStepsReached: return "max-steps";
  }
  return "?";
}

// Trace of x, Tx, T^2 x, ... A "window" w is the triple
// (points[w], points[w+1], points[w+2]); perimeters[w] is its distance sum
// (computed even when points repeat, in which case the window is not
// `window_valid` and chain checks skip it). When an (F, G) pair is given,
// f_values/g_values hold F and G on each window's three distances.
struct OrbitTrace {
  std::vector<int> points;
  std::vector<double> step_dists;
  std::vector<double> perimeters;
  std::optional<std::vector<double>> f_values;
  std::optional<std::vector<double>> g_values;
  OrbitTermination termination = OrbitTermination::MaxStepsReached;
  int cycle_period = 0;  // nonzero only for CycleDetected

  std::size_t window_count() const {
    return points.size() >= 3 ? points.size() - 2 : 0;
  }
  bool window_valid(std::size_t w) const {
    return points[w] != points[w + 1] && points[w + 1] != points[w + 2] &&
           points[w] != points[w + 2];
  }
  int steps() const { return static_cast<int>(points.size()) - 1; }
};

namespace detail {

inline OrbitTrace picard_orbit_impl(const FiniteMetricSpace& space, const SelfMap& map, int x0,
                                    int max_steps, const TripleAggregator* F,
                                    const TripleAggregator* G) {
  if (x0 < 0 || x0 >= space.size()) throw std::invalid_argument("orbit start index out of range");
  if (max_steps < 1) throw std::invalid_argument("orbit needs max_steps >= 1");

  OrbitTrace trace;
  trace.points.push_back(x0);
  std::unordered_map<int, int> seen{{x0, 0}};

  for (int step = 0; step < max_steps; ++step) {
    const int cur = trace.points.back();
    const int next = map(cur);
    if (next == cur) {
      trace.termination = OrbitTermination::FixedPointHit;
      break;
    }
    const auto it = seen.find(next);
    if (it != seen.end()) {
      trace.termination = OrbitTermination::CycleDetected;
      trace.cycle_period = static_cast<int>(trace.points.size()) - it->second;
      break;
    }
    seen.emplace(next, static_cast<int>(trace.points.size()));
    trace.points.push_back(next);
    trace.termination = OrbitTermination::MaxStepsReached;
  }

  for (std::size_t i = 0; i + 1 < trace.points.size(); ++i)
    trace.step_dists.push_back(space.dist(trace.points[i], trace.points[i + 1]));
  if (F && G) {
    trace.f_values.emplace();
    trace.g_values.emplace();
  }
  for (std::size_t w = 0; w < trace.window_count(); ++w) {
    const double a = space.dist(trace.points[w], trace.points[w + 1]);
    const double b = space.dist(trace.points[w + 1], trace.points[w + 2]);
    const double c = space.dist(trace.points[w + 2], trace.points[w]);
    trace.perimeters.push_back(sorted_sum3(a, b, c));
    if (F && G) {
      trace.f_values->push_back(evaluate(*F, a, b, c));
      trace.g_values->push_back(evaluate(*G, a, b, c));
    }
  }
  return trace;
}

}  // namespace detail

inline OrbitTrace picard_orbit(const FiniteMetricSpace& space, const SelfMap& map, int x0,
                               int max_steps) {
  return detail::picard_orbit_impl(space, map, x0, max_steps, nullptr, nullptr);
}

inline OrbitTrace picard_orbit(const FiniteMetricSpace& space, const SelfMap& map, int x0,
                               int max_steps, const TripleAggregator& F,
                               const TripleAggregator& G) {
  return detail::picard_orbit_impl(space, map, x0, max_steps, &F, &G);
}

// Tail bound p0 * alpha^(n-1) / (1 - alpha) on d(x_n, limit) for a
// modulus-alpha orbit whose first window has G-value p0. Defined for n >= 1.
inline double a_priori_bound(double p0, double alpha, int n) {
  if (!(p0 >= 0.0) || !std::isfinite(p0)) throw std::domain_error("p0 must be finite and nonnegative");
  if (!(alpha >= 0.0) || !(alpha < 1.0)) throw std::domain_error("alpha must lie in [0, 1)");
  if (n < 1) throw std::domain_error("a priori bound is defined for n >= 1");
  return p0 * std::pow(alpha, n - 1) / (1.0 - alpha);
}

enum class SolveStatus { Converged, Cycle, Exhausted };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Cycle: return "cycle";
    case SolveStatus::Exhausted: return "exhausted";
  }
  return "?";
}

// `steps` is the iteration count at the stopping criterion: the exact hit,
// or the first n whose certified bound drops to tol, whichever comes first.
// `certified_bounds[i]` bounds d(x_{i+1}, limit); it is only populated when
// the perimeter modulus is < 1, a pairwise-distinct window exists, and the
// traced orbit never revisits a point (a revisit breaks the chain that
// justifies the bound). `fixed_point` is set whenever the orbit reached an
// exact fixed point, and satisfies map(fixed_point) == fixed_point.
struct FixedPointResult {
  SolveStatus status = SolveStatus::Exhausted;
  std::optional<int> fixed_point;
  int steps = 0;
  std::vector<double> certified_bounds;
  double modulus = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> p0;
};

inline FixedPointResult solve_fixed_point(const FiniteMetricSpace& space, const SelfMap& map,
                                          int x0, double tol = 0.0, int max_steps = 1000,
                                          const SweepOptions& opts = {}) {
  if (!(tol >= 0.0)) throw std::invalid_argument("solver tolerance must be nonnegative");
  FixedPointResult result;
  result.modulus = perimeter_modulus(space, map, opts).modulus;

  const OrbitTrace trace = picard_orbit(space, map, x0, max_steps);
  const bool hit = trace.termination == OrbitTermination::FixedPointHit;
  const bool cycled = trace.termination == OrbitTermination::CycleDetected;

  for (std::size_t w = 0; w < trace.window_count(); ++w) {
    if (trace.window_valid(w)) {
      result.p0 = trace.perimeters[w];
      break;
    }
  }

  const bool certified = result.modulus < 1.0 && result.p0.has_value() && !cycled;
  int cert_step = std::numeric_limits<int>::max();
  if (certified) {
    for (int n = 1; n <= trace.steps(); ++n) {
      const double bound = a_priori_bound(*result.p0, result.modulus, n);
      result.certified_bounds.push_back(bound);
      if (bound <= tol && n < cert_step) cert_step = n;
    }
  }

  if (hit) {
    result.status = SolveStatus::Converged;
    result.fixed_point = trace.points.back();
    result.steps = std::min(trace.steps(), cert_step);
  } else if (cycled) {
    result.status = SolveStatus::Cycle;
    result.steps = trace.steps();
  } else if (cert_step <= trace.steps()) {
    // Certificate says the limit is within tol even though the exact fixed
    // point was not reached inside max_steps.
    result.status = SolveStatus::Converged;
    result.steps = cert_step;
  } else {
    result.status = SolveStatus::Exhausted;
    result.steps = trace.steps();
  }
  return result;
}

inline std::vector<int> enumerate_fixed_points(const FiniteMetricSpace& space, const SelfMap& map) {
  std::vector<int> out;
  for (int i = 0; i < space.size(); ++i)
    if (map(i) == i) out.push_back(i);
  return out;
}

// Verdict of the descending-chain audit along an orbit.
struct ChainCheck {
  bool ok = true;
  int windows_checked = 0;
  std::optional<int> first_violation;
};

// Audits p_w > 0, F-value >= G-value per valid window, and
// F_{w+1} <= alpha * G_w across consecutive valid windows; the two value
// sequences default to the raw perimeters when the trace carries no (F, G).
// Windows with repeated points (the orbit reached its fixed point) are
// skipped, as is any cross-window link interrupted by such a window.
inline ChainCheck check_perimeter_chain(const OrbitTrace& trace, double alpha,
                                        double rel = detail::kDefaultRelTol) {
  if (!(alpha >= 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("chain check needs alpha in [0, 1)");
  const std::vector<double>& f = trace.f_values ? *trace.f_values : trace.perimeters;
  const std::vector<double>& g = trace.g_values ? *trace.g_values : trace.perimeters;

  ChainCheck chk;
  auto fail = [&](std::size_t w) {
    chk.ok = false;
    if (!chk.first_violation) chk.first_violation = static_cast<int>(w);
  };

  for (std::size_t w = 0; w < trace.window_count(); ++w) {
    if (!trace.window_valid(w)) continue;
    ++chk.windows_checked;
    if (!(g[w] > 0.0)) fail(w);
    if (!detail::leq_rel(g[w], f[w], rel)) fail(w);
  }
  for (std::size_t w = 0; w + 1 < trace.window_count(); ++w) {
    if (!trace.window_valid(w) || !trace.window_valid(w + 1)) continue;
    if (!detail::leq_rel(f[w + 1], alpha * g[w], rel)) fail(w + 1);
  }
  return chk;
}

}  // namespace perimetric

#endif  // PERIMETRIC_SOLVER_HPP
