#ifndef PERIMETRIC_CLASSIFIER_HPP
#define PERIMETRIC_CLASSIFIER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "perimetric/aggregators.hpp"
#include "perimetric/detail/numeric.hpp"
#include "perimetric/metric_space.hpp"

namespace perimetric {

// Sweep controls. `threads == 0` means one worker per hardware thread.
// `subset` restricts which points may appear in the argument tuples of a
// sweep (images are unrestricted); empty means all points. Must be sorted
// and duplicate-free.
struct SweepOptions {
  unsigned threads = 0;
  std::vector<int> subset;
};

// Result of a modulus sweep. `witness` holds the 2 or 3 point indices of
// the lexicographically smallest tuple attaining the modulus.
// `strict_margin` is the smallest slack (denominator minus numerator) seen
// anywhere, clamped to 0 when some tuple violates strictness. `marginal`
// flags a smallest slack whose magnitude is within 1e-12 relative of the
// tuple's scale: the strictness verdict sits inside floating point noise.
struct ModulusReport {
  double modulus = 0.0;
  std::vector<int> witness;
  std::uint64_t evaluated_count = 0;
  double strict_margin = 0.0;
  bool marginal = false;
};

// Verdict of a strict-decrease check. When it holds, `witness` is the
// tuple with the smallest slack; when it fails, the lexicographically
// first violating tuple (slack <= 0). `slack` belongs to that witness.
struct StrictCheck {
  bool holds = false;
  std::vector<int> witness;
  double slack = 0.0;
  bool marginal = false;
  std::uint64_t evaluated_count = 0;
};

namespace detail {

constexpr std::uint64_t kNoIndex = std::numeric_limits<std::uint64_t>::max();

// Per-chunk reduction state. All comparisons are total orders on
// (value, rank), so merging chunks in any order yields the same result as
// a sequential sweep, bit for bit.
struct SweepAccum {
  double best_ratio = -std::numeric_limits<double>::infinity();
  std::uint64_t best_rank = kNoIndex;
  std::array<int, 3> best_tuple{-1, -1, -1};

  double min_slack = std::numeric_limits<double>::infinity();
  std::uint64_t min_slack_rank = kNoIndex;
  std::array<int, 3> min_slack_tuple{-1, -1, -1};
  double min_slack_scale = 0.0;

  std::uint64_t first_violation_rank = kNoIndex;
  std::array<int, 3> first_violation_tuple{-1, -1, -1};
  double first_violation_slack = 0.0;

  std::uint64_t count = 0;

  void consider(std::uint64_t rank, std::array<int, 3> tuple, double num, double den) {
    ++count;
    const double ratio = num / den;
    if (ratio > best_ratio || (ratio == best_ratio && rank < best_rank)) {
      best_ratio = ratio;
      best_rank = rank;
      best_tuple = tuple;
    }
    const double slack = den - num;
    if (slack < min_slack || (slack == min_slack && rank < min_slack_rank)) {
      min_slack = slack;
      min_slack_rank = rank;
      min_slack_tuple = tuple;
      min_slack_scale = den;
    }
    if (slack <= 0.0 && rank < first_violation_rank) {
      first_violation_rank = rank;
      first_violation_tuple = tuple;
      first_violation_slack = slack;
    }
  }

  void merge(const SweepAccum& o) {
    count += o.count;
    if (o.best_ratio > best_ratio || (o.best_ratio == best_ratio && o.best_rank < best_rank)) {
      best_ratio = o.best_ratio;
      best_rank = o.best_rank;
      best_tuple = o.best_tuple;
    }
    if (o.min_slack < min_slack || (o.min_slack == min_slack && o.min_slack_rank < min_slack_rank)) {
      min_slack = o.min_slack;
      min_slack_rank = o.min_slack_rank;
      min_slack_tuple = o.min_slack_tuple;
      min_slack_scale = o.min_slack_scale;
    }
    if (o.first_violation_rank < first_violation_rank) {
      first_violation_rank = o.first_violation_rank;
      first_violation_tuple = o.first_violation_tuple;
      first_violation_slack = o.first_violation_slack;
    }
  }

  bool marginal() const {
    return min_slack != 0.0 && std::abs(min_slack) < kDefaultRelTol * min_slack_scale;
  }
};

inline std::vector<int> resolve_subset(const FiniteMetricSpace& space, const SweepOptions& opts) {
  if (opts.subset.empty()) {
    std::vector<int> all(static_cast<std::size_t>(space.size()));
    for (int i = 0; i < space.size(); ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  std::vector<int> s = opts.subset;
  for (int v : s)
    if (v < 0 || v >= space.size()) throw std::invalid_argument("sweep subset index out of range");
  if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
    throw std::invalid_argument("sweep subset must be sorted and duplicate-free");
  return s;
}

inline unsigned resolve_threads(unsigned requested, std::uint64_t total) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (total < t) t = static_cast<unsigned>(std::max<std::uint64_t>(total, 1));
  return t;
}

// Runs per_range(begin_rank, end_rank, accum) over a chunked [0, total)
// and merges the chunk accumulators. Chunk boundaries do not influence
// the result; they only split the work.
template <class PerRange>
SweepAccum run_chunked(std::uint64_t total, unsigned threads, PerRange&& per_range) {
  const unsigned t = resolve_threads(threads, total);
  std::vector<SweepAccum> parts(t);
  if (t == 1) {
    per_range(0, total, parts[0]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(t);
    workers.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
      const std::uint64_t lo = total * w / t;
      const std::uint64_t hi = total * (w + 1) / t;
      workers.emplace_back([&, w, lo, hi] {
        try {
          per_range(lo, hi, parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : workers) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  SweepAccum out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

// eval(i, j) -> {numerator, denominator} over underlying point indices.
template <class Eval>
SweepAccum sweep_pairs(const FiniteMetricSpace& space, const SweepOptions& opts, Eval&& eval) {
  const std::vector<int> pts = resolve_subset(space, opts);
  const int m = static_cast<int>(pts.size());
  const std::uint64_t total = pair_count(m);
  return run_chunked(total, opts.threads, [&](std::uint64_t lo, std::uint64_t hi, SweepAccum& acc) {
    if (lo >= hi) return;
    auto [a, b] = unrank_pair(lo, m);
    for (std::uint64_t r = lo; r < hi; ++r) {
      const int i = pts[static_cast<std::size_t>(a)];
      const int j = pts[static_cast<std::size_t>(b)];
      const auto [num, den] = eval(i, j);
      acc.consider(r, {i, j, -1}, num, den);
      if (b + 1 < m) {
        ++b;
      } else if (a + 2 < m) {
        ++a;
        b = a + 1;
      }
    }
  });
}

// eval(i, j, k) -> {numerator, denominator} over underlying point indices.
template <class Eval>
SweepAccum sweep_triples(const FiniteMetricSpace& space, const SweepOptions& opts, Eval&& eval) {
  const std::vector<int> pts = resolve_subset(space, opts);
  const int m = static_cast<int>(pts.size());
  const std::uint64_t total = triple_count(m);
  return run_chunked(total, opts.threads, [&](std::uint64_t lo, std::uint64_t hi, SweepAccum& acc) {
    if (lo >= hi) return;
    Triple t = unrank_triple(lo, m);
    for (std::uint64_t r = lo; r < hi; ++r) {
      const int i = pts[static_cast<std::size_t>(t.i)];
      const int j = pts[static_cast<std::size_t>(t.j)];
      const int k = pts[static_cast<std::size_t>(t.k)];
      const auto [num, den] = eval(i, j, k);
      acc.consider(r, {i, j, k}, num, den);
      advance_triple(t, m);
    }
  });
}

inline std::vector<int> tuple_vec(const std::array<int, 3>& t) {
  std::vector<int> v;
  for (int x : t)
    if (x >= 0) v.push_back(x);
  return v;
}

inline ModulusReport modulus_report(const SweepAccum& acc) {
  ModulusReport rep;
  rep.modulus = acc.count == 0 ? 0.0 : acc.best_ratio;
  rep.witness = tuple_vec(acc.best_tuple);
  rep.evaluated_count = acc.count;
  rep.strict_margin = (acc.count > 0 && acc.min_slack > 0.0) ? acc.min_slack : 0.0;
  rep.marginal = acc.count > 0 && acc.marginal();
  return rep;
}

inline StrictCheck strict_check(const SweepAccum& acc) {
  StrictCheck chk;
  chk.evaluated_count = acc.count;
  chk.holds = acc.count == 0 || acc.min_slack > 0.0;
  if (chk.holds) {
    chk.witness = tuple_vec(acc.min_slack_tuple);
    chk.slack = acc.count == 0 ? 0.0 : acc.min_slack;
  } else {
    chk.witness = tuple_vec(acc.first_violation_tuple);
    chk.slack = acc.first_violation_slack;
  }
  chk.marginal = acc.count > 0 && acc.marginal();
  return chk;
}

struct PairDistances {
  double image;
  double original;
};

inline PairDistances pair_dists(const FiniteMetricSpace& space, const SelfMap& map, int i, int j) {
  const double den = space.dist(i, j);
  if (!(den > 0.0))
    throw std::domain_error("zero distance between distinct points; not a metric space");
  return {space.dist(map(i), map(j)), den};
}

}  // namespace detail

// Largest d(Tx,Ty)/d(x,y) over distinct pairs.
inline ModulusReport banach_modulus(const FiniteMetricSpace& space, const SelfMap& map,
                                    const SweepOptions& opts = {}) {
  const auto acc = detail::sweep_pairs(space, opts, [&](int i, int j) {
    const auto d = detail::pair_dists(space, map, i, j);
    return std::pair<double, double>(d.image, d.original);
  });
  return detail::modulus_report(acc);
}

// Largest image-perimeter / perimeter over distinct triples. Triples whose
// images coincide still count; their numerator simply loses terms.
inline ModulusReport perimeter_modulus(const FiniteMetricSpace& space, const SelfMap& map,
                                       const SweepOptions& opts = {}) {
  const auto acc = detail::sweep_triples(space, opts, [&](int i, int j, int k) {
    const double den = perimeter(space, i, j, k);
    if (!(den > 0.0))
      throw std::domain_error("zero perimeter on a distinct triple; not a metric space");
    const double num = detail::sorted_sum3(space.dist(map(i), map(j)), space.dist(map(j), map(k)),
                                           space.dist(map(i), map(k)));
    return std::pair<double, double>(num, den);
  });
  return detail::modulus_report(acc);
}

// Largest F(image distances) / G(original distances) over distinct triples.
// Callers are expected to have established that (F, G) is admissible; a
// nonpositive denominator means G fails to dominate its arguments on the
// actual data and is rejected here.
inline ModulusReport fg_modulus(const FiniteMetricSpace& space, const SelfMap& map,
                                const TripleAggregator& F, const TripleAggregator& G,
                                const SweepOptions& opts = {}) {
  const auto acc = detail::sweep_triples(space, opts, [&](int i, int j, int k) {
    const double den = evaluate(G, space.dist(i, j), space.dist(j, k), space.dist(i, k));
    if (!(den > 0.0))
      throw std::domain_error("G is not positive on a distinct triple; inadmissible G");
    const double num = evaluate(F, space.dist(map(i), map(j)), space.dist(map(j), map(k)),
                                space.dist(map(i), map(k)));
    return std::pair<double, double>(num, den);
  });
  return detail::modulus_report(acc);
}

// Strict d(Tx,Ty) < d(x,y) on every distinct pair.
inline StrictCheck is_edelstein_contractive(const FiniteMetricSpace& space, const SelfMap& map,
                                            const SweepOptions& opts = {}) {
  const auto acc = detail::sweep_pairs(space, opts, [&](int i, int j) {
    const auto d = detail::pair_dists(space, map, i, j);
    return std::pair<double, double>(d.image, d.original);
  });
  return detail::strict_check(acc);
}

// Strict perimeter decrease on every distinct triple.
inline StrictCheck is_edelstein_perimeter(const FiniteMetricSpace& space, const SelfMap& map,
                                          const SweepOptions& opts = {}) {
  const auto acc = detail::sweep_triples(space, opts, [&](int i, int j, int k) {
    const double den = perimeter(space, i, j, k);
    if (!(den > 0.0))
      throw std::domain_error("zero perimeter on a distinct triple; not a metric space");
    const double num = detail::sorted_sum3(space.dist(map(i), map(j)), space.dist(map(j), map(k)),
                                           space.dist(map(i), map(k)));
    return std::pair<double, double>(num, den);
  });
  return detail::strict_check(acc);
}

// Strict d(Tx,Ty) < d(x,y) against one fixed x, for every other y.
// Witness holds the offending (or tightest) y.
inline StrictCheck pointwise_contractive_at(const FiniteMetricSpace& space, const SelfMap& map,
                                            int x) {
  if (x < 0 || x >= space.size()) throw std::invalid_argument("point index out of range");
  detail::SweepAccum acc;
  std::uint64_t rank = 0;
  for (int y = 0; y < space.size(); ++y) {
    if (y == x) continue;
    const auto d = detail::pair_dists(space, map, x, y);
    acc.consider(rank++, {y, -1, -1}, d.image, d.original);
  }
  return detail::strict_check(acc);
}

// Points of exact period 2: T(Tx) = x with Tx != x.
inline std::vector<int> find_period2_points(const FiniteMetricSpace& space, const SelfMap& map) {
  std::vector<int> out;
  for (int i = 0; i < space.size(); ++i)
    if (map(map(i)) == i && map(i) != i) out.push_back(i);
  return out;
}

struct ClassificationReport {
  ModulusReport banach;
  ModulusReport perimeter;
  std::optional<ModulusReport> fg;
  std::string f_spec, g_spec;
  StrictCheck edelstein_contractive;
  StrictCheck edelstein_perimeter;
  std::vector<int> period2_points;
  std::vector<int> fixed_points;
};

// Full classification. Cross-checks the implication hierarchy before
// returning; a violation there can only come from a defect in the sweeps
// themselves, so it throws logic_error rather than reporting data.
inline ClassificationReport classify(const FiniteMetricSpace& space, const SelfMap& map,
                                     const std::optional<std::pair<TripleAggregator, TripleAggregator>>& fg =
                                         std::nullopt,
                                     const SweepOptions& opts = {}) {
  ClassificationReport rep;
  rep.banach = banach_modulus(space, map, opts);
  rep.perimeter = perimeter_modulus(space, map, opts);
  rep.edelstein_contractive = is_edelstein_contractive(space, map, opts);
  rep.edelstein_perimeter = is_edelstein_perimeter(space, map, opts);
  rep.period2_points = find_period2_points(space, map);
  for (int i = 0; i < space.size(); ++i)
    if (map(i) == i) rep.fixed_points.push_back(i);
  if (fg) {
    rep.fg = fg_modulus(space, map, fg->first, fg->second, opts);
    rep.f_spec = fg->first.spec_string();
    rep.g_spec = fg->second.spec_string();
  }

  // Pair ratios dominate the perimeter ratio (mediant inequality), and a
  // sub-1 modulus forces the corresponding strict decrease. The first
  // comparison tolerates relative rounding from the different summation
  // paths; the implications are exact by construction.
  if (rep.perimeter.modulus > rep.banach.modulus * (1.0 + detail::kDefaultRelTol))
    throw std::logic_error("hierarchy violation: perimeter modulus exceeds banach modulus");
  if (rep.banach.modulus < 1.0 && !rep.edelstein_contractive.holds)
    throw std::logic_error("hierarchy violation: banach modulus < 1 without strict pair decrease");
  if (rep.perimeter.modulus < 1.0 && !rep.edelstein_perimeter.holds)
    throw std::logic_error("hierarchy violation: perimeter modulus < 1 without strict perimeter decrease");
  return rep;
}

}  // namespace perimetric

#endif  // PERIMETRIC_CLASSIFIER_HPP
