#ifndef PERIMETRIC_GALLERY_HPP
#define PERIMETRIC_GALLERY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "perimetric/classifier.hpp"
#include "perimetric/detail/numeric.hpp"
#include "perimetric/metric_space.hpp"

namespace perimetric {

struct GalleryConfig {
  int depth = 20;         // chain columns x_0 .. x_depth
  double epsilon = 0.01;  // same-column pairing distance scale
  std::uint64_t seed = 0; // random instances only
};

struct GalleryInstance {
  FiniteMetricSpace space;
  SelfMap map;
};

// Three points at mutual distance 1; z folds onto x, the rest stay put.
// The one triangle strictly shrinks (perimeter 3 -> 2) while the pair
// (x, y) keeps its distance, and both x and y are fixed.
inline GalleryInstance build_three_point_example() {
  FiniteMetricSpace space({"x", "y", "z"},
                          std::vector<double>{0, 1, 1, 1, 0, 1, 1, 1, 0});
  SelfMap map({0, 1, 0}, 3);
  return {std::move(space), std::move(map)};
}

namespace detail {

// Sum of 1/k^2 for k in (i, j], accumulated in ascending k. Every chain
// distance in the figure-1 space is one of these fresh sums, so measured
// perimeter ratios agree with the closed-form consecutive ratio to a few ulp.
inline double chain_gap_sum(int i, int j) {
  double s = 0.0;
  for (int k = i + 1; k <= j; ++k) {
    const double kk = static_cast<double>(k);
    s += 1.0 / (kk * kk);
  }
  return s;
}

inline double figure1_pair_dist(int column, double epsilon) {
  const int odd = (column % 2 == 1) ? column : column + 1;
  const double oo = static_cast<double>(odd);
  return epsilon / (oo * oo);
}

}  // namespace detail

// Truncation of the two-rail chain space: columns x_0..x_N plus their
// primed twins, and a far point x* that closes the series sum. Layout:
// x_i at index 2i, x_i' at 2i+1, x* last. Distances: any two points in
// columns i < j sit at sum of the gaps 1/k^2 for i < k <= j; twins in
// column i sit at eps/i^2 (odd i) or eps/(i+1)^2 (even i); every point of
// column i is pi^2/6 - (gap sum up to i) away from x*.
// The map shifts both rails one column right, and the final column is
// patched to land on x* (which is fixed).
inline GalleryInstance build_figure1_space(const GalleryConfig& config) {
  const int N = config.depth;
  const double eps = config.epsilon;
  if (N < 6) throw std::invalid_argument("figure-1 truncation needs depth >= 6");
  if (!(eps > 0.0)) throw std::invalid_argument("figure-1 epsilon must be positive");

  const int n = 2 * (N + 1) + 1;
  const int star = n - 1;
  const double series = std::numbers::pi_v<double> * std::numbers::pi_v<double> / 6.0;

  std::vector<std::string> labels(static_cast<std::size_t>(n));
  for (int i = 0; i <= N; ++i) {
    labels[static_cast<std::size_t>(2 * i)] = "x" + std::to_string(i);
    labels[static_cast<std::size_t>(2 * i + 1)] = "x" + std::to_string(i) + "'";
  }
  labels[static_cast<std::size_t>(star)] = "x*";

  std::vector<double> d(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  auto at = [&](int a, int b) -> double& {
    return d[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)];
  };
  auto set = [&](int a, int b, double v) { at(a, b) = v; at(b, a) = v; };

  for (int i = 0; i <= N; ++i) {
    set(2 * i, 2 * i + 1, detail::figure1_pair_dist(i, eps));
    const double tail = series - detail::chain_gap_sum(0, i);
    set(2 * i, star, tail);
    set(2 * i + 1, star, tail);
    for (int j = i + 1; j <= N; ++j) {
      const double gap = detail::chain_gap_sum(i, j);
      set(2 * i, 2 * j, gap);
      set(2 * i, 2 * j + 1, gap);
      set(2 * i + 1, 2 * j, gap);
      set(2 * i + 1, 2 * j + 1, gap);
    }
  }

  FiniteMetricSpace space(std::move(labels), std::move(d));
  const MetricValidationReport check = validate_metric(space, 1e-12);
  if (!check.ok) {
    const MetricViolation& v = check.violations.front();
    std::ostringstream msg;
    msg << "figure-1 construction (depth=" << N << ", epsilon=" << eps
        << ") violates the " << to_string(v.axiom) << " axiom at ("
        << space.label(v.where[0]) << ", " << space.label(v.where[1]);
    if (v.where[2] >= 0) msg << ", " << space.label(v.where[2]);
    msg << "), slack " << v.slack;
    throw std::domain_error(msg.str());
  }

  std::vector<int> image(static_cast<std::size_t>(n), star);
  for (int i = 0; i < N; ++i) {
    image[static_cast<std::size_t>(2 * i)] = 2 * (i + 1);
    image[static_cast<std::size_t>(2 * i + 1)] = 2 * (i + 1) + 1;
  }
  // x_N, x_N' and x* itself all go to x*.
  return {std::move(space), SelfMap(std::move(image), n)};
}

// Perimeter ratio of the consecutive triple (x_i, x_{i+1}, x_{i+2}) under
// the shift, in closed form. Increasing in i with limit 1: the shift is a
// strict perimeter contraction with no uniform modulus below 1.
inline double consecutive_triple_ratio(int i) {
  if (i < 0) throw std::invalid_argument("consecutive triple index must be nonnegative");
  const double a = static_cast<double>(i + 1);
  const double b = static_cast<double>(i + 2);
  const double c = static_cast<double>(i + 3);
  const double num = 2.0 / (b * b) + 2.0 / (c * c);
  const double den = 2.0 / (a * a) + 2.0 / (b * b);
  return num / den;
}

// Machine-checked form of the claims the truncation inherits from the
// infinite space. The boundary patch (last column onto x*) genuinely
// expands boundary tuples, so each claim sweeps argument tuples away from
// the patched points: the banach sweep drops the last column, and the
// perimeter claims keep only columns 0..depth-2.
struct Figure1Claims {
  GalleryConfig config;
  MetricValidationReport validation;
  ModulusReport banach_off_patch;       // pairs avoiding x_N, x_N'
  bool banach_modulus_is_one = false;
  bool banach_witness_even_pair = false;
  ModulusReport perimeter_interior;     // triples within columns <= depth-2
  double ratio_lower_bound = 0.0;       // consecutive_triple_ratio(depth - 5)
  bool perimeter_within_bounds = false; // ratio_lower_bound <= modulus < 1
  StrictCheck edelstein_perimeter_interior;
  int interior_point_count = 0;
  std::uint64_t excluded_triple_count = 0;
  bool ok = false;
};

inline Figure1Claims verify_figure1_claims(const GalleryConfig& config,
                                           const SweepOptions& opts = {}) {
  const GalleryInstance inst = build_figure1_space(config);
  const int N = config.depth;
  const int n = inst.space.size();

  Figure1Claims claims;
  claims.config = config;
  claims.validation = validate_metric(inst.space, 1e-12);

  SweepOptions off_patch = opts;
  off_patch.subset.clear();
  for (int p = 0; p < n; ++p)
    if (p != 2 * N && p != 2 * N + 1) off_patch.subset.push_back(p);
  claims.banach_off_patch = banach_modulus(inst.space, inst.map, off_patch);
  claims.banach_modulus_is_one = std::abs(claims.banach_off_patch.modulus - 1.0) <= 1e-12;
  if (claims.banach_off_patch.witness.size() == 2) {
    const int a = claims.banach_off_patch.witness[0];
    const int b = claims.banach_off_patch.witness[1];
    claims.banach_witness_even_pair = (b == a + 1) && (a % 2 == 0) && ((a / 2) % 2 == 0);
  }

  SweepOptions interior = opts;
  interior.subset.clear();
  for (int i = 0; i <= N - 2; ++i) {
    interior.subset.push_back(2 * i);
    interior.subset.push_back(2 * i + 1);
  }
  claims.interior_point_count = static_cast<int>(interior.subset.size());
  claims.excluded_triple_count =
      triple_count(n) - triple_count(claims.interior_point_count);

  claims.perimeter_interior = perimeter_modulus(inst.space, inst.map, interior);
  claims.ratio_lower_bound = consecutive_triple_ratio(N - 5);
  claims.perimeter_within_bounds =
      claims.perimeter_interior.modulus >= claims.ratio_lower_bound &&
      claims.perimeter_interior.modulus < 1.0;

  claims.edelstein_perimeter_interior = is_edelstein_perimeter(inst.space, inst.map, interior);

  claims.ok = claims.validation.ok && claims.banach_modulus_is_one &&
              claims.banach_witness_even_pair && claims.perimeter_within_bounds &&
              claims.edelstein_perimeter_interior.holds;
  return claims;
}

// The three-point example's claims: the triangle strictly shrinks but the
// map is not contractive, exactly two fixed points survive, and the two
// moduli take their textbook values 1 and 2/3.
struct ThreePointClaims {
  ClassificationReport classification;
  bool perimeter_strictly_decreases = false;
  bool not_contractive = false;
  bool two_fixed_points = false;
  bool banach_modulus_is_one = false;
  bool perimeter_modulus_two_thirds = false;
  bool ok = false;
};

inline ThreePointClaims verify_three_point_claims(const SweepOptions& opts = {}) {
  const GalleryInstance inst = build_three_point_example();
  ThreePointClaims claims;
  claims.classification = classify(inst.space, inst.map, std::nullopt, opts);
  claims.perimeter_strictly_decreases = claims.classification.edelstein_perimeter.holds;
  claims.not_contractive = !claims.classification.edelstein_contractive.holds;
  claims.two_fixed_points = claims.classification.fixed_points == std::vector<int>{0, 1};
  claims.banach_modulus_is_one = std::abs(claims.classification.banach.modulus - 1.0) <= 1e-12;
  claims.perimeter_modulus_two_thirds =
      std::abs(claims.classification.perimeter.modulus - 2.0 / 3.0) <= 1e-15;
  claims.ok = claims.perimeter_strictly_decreases && claims.not_contractive &&
              claims.two_fixed_points && claims.banach_modulus_is_one &&
              claims.perimeter_modulus_two_thirds;
  return claims;
}

namespace detail {

inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Unbiased draw in [0, n) by rejection; avoids std::uniform_int_distribution,
// whose output is not pinned down by the standard.
inline int bounded_draw(std::mt19937_64& rng, int n) {
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<int>(r % span);
}

}  // namespace detail

// Random test instance: shortest-path completion of a random positive
// weight on each edge, plus a random self-map that is squared with
// probability 1/2 (squaring collapses images, which keeps a healthy share
// of contracting maps in the stream). Draw order is fixed (edge weights
// row-major, then map entries, then the squaring coin), so a seed fully
// determines the instance on every platform.
inline GalleryInstance random_instance(int n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("random instance needs at least 3 points");
  std::mt19937_64 rng(seed);

  const double w_lo = 0.2, w_hi = 2.0;
  std::vector<double> d(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  auto at = [&](int a, int b) -> double& {
    return d[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)];
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double w = w_lo + (w_hi - w_lo) * detail::unit_double(rng());
      at(i, j) = w;
      at(j, i) = w;
    }

  // Shortest-path completion, then keep repairing until the triangle audit's
  // own predicate ((d_ij - d_ik) - d_kj <= 0) holds everywhere at tolerance
  // zero. fl(a+b) alone is not enough: when the sum rounds up, the audit's
  // sequential subtractions can still leave a one-ulp positive slack, so the
  // repair walks the entry down until the audit expression clears. Writes are
  // mirrored, which keeps the matrix exactly symmetric throughout.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const double a = at(i, k);
          const double b = at(k, j);
          double v = at(i, j);
          if (v > a + b) v = a + b;
          while ((v - a) - b > 0.0) v = std::nextafter(v, 0.0);
          if (v != at(i, j)) {
            at(i, j) = v;
            at(j, i) = v;
            changed = true;
          }
        }
  }

  std::vector<std::string> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = "p" + std::to_string(i);

  std::vector<int> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(i)] = detail::bounded_draw(rng, n);
  SelfMap map(std::move(image), n);
  if (rng() & 1u) map = map.composed_with_self();

  return {FiniteMetricSpace(std::move(labels), std::move(d)), std::move(map)};
}

}  // namespace perimetric

#endif  // PERIMETRIC_GALLERY_HPP
