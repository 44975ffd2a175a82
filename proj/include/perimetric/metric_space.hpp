#ifndef PERIMETRIC_METRIC_SPACE_HPP
#define PERIMETRIC_METRIC_SPACE_HPP

#include <array>
#include <cstdint>
#include <iterator>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "perimetric/detail/numeric.hpp"

namespace perimetric {

// A finite metric space: n labeled points and an n-by-n distance matrix.
// Construction only enforces shape (square, finite entries, n >= 3);
// whether the matrix actually satisfies the metric axioms is the job of
// validate_metric, so that broken inputs can be loaded and diagnosed.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist_flat)
      : n_(static_cast<int>(labels.size())),
        labels_(std::move(labels)),
        d_(std::move(dist_flat)) {
    if (n_ < 3) throw std::invalid_argument("metric space needs at least 3 points");
    if (d_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
      throw std::invalid_argument("distance matrix size does not match label count");
    for (double v : d_)
      if (!detail::is_finite(v)) throw std::invalid_argument("distance matrix has a non-finite entry");
  }

  FiniteMetricSpace(std::vector<std::string> labels, const std::vector<std::vector<double>>& rows)
      : FiniteMetricSpace(std::move(labels), flatten(rows)) {}

  int size() const { return n_; }

  double dist(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& flat() const { return d_; }

  std::optional<int> index_of(const std::string& label) const {
    for (int i = 0; i < n_; ++i)
      if (labels_[static_cast<std::size_t>(i)] == label) return i;
    return std::nullopt;
  }

  double max_distance() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, v);
    return m;
  }

  // Sorted unique off-diagonal values. Used as the natural grid when
  // checking aggregator side conditions against a concrete instance.
  std::vector<double> distance_grid() const {
    std::set<double> vals;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j) vals.insert(dist(i, j));
    return {vals.begin(), vals.end()};
  }

  FiniteMetricSpace scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
    std::vector<double> d = d_;
    for (double& v : d) v *= lambda;
    return {labels_, std::move(d)};
  }

 private:
  static std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw std::invalid_argument("distance matrix is not square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
  }

  int n_;
  std::vector<std::string> labels_;
  std::vector<double> d_;
};

// A self-map of the point set, stored as image indices.
class SelfMap {
 public:
  SelfMap(std::vector<int> image, int n) : n_(n), image_(std::move(image)) {
    if (image_.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("self-map image size does not match point count");
    for (int v : image_)
      if (v < 0 || v >= n_) throw std::invalid_argument("self-map image index out of range");
  }

  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  int size() const { return n_; }
  const std::vector<int>& image() const { return image_; }

  SelfMap composed_with_self() const {
    std::vector<int> sq(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i)
      sq[i] = image_[static_cast<std::size_t>(image_[i])];
    return {std::move(sq), n_};
  }

 private:
  int n_;
  std::vector<int> image_;
};

enum class MetricAxiom { Identity, Symmetry, Triangle };

inline const char* to_string(MetricAxiom a) {
  switch (a) {
    case MetricAxiom::Identity: return "identity";
    case MetricAxiom::Symmetry: return "symmetry";
    case MetricAxiom::Triangle: return "triangle";
  }
  return "?";
}

// One axiom violation. `where` holds the participating indices; the third
// slot is -1 for the pair axioms. `slack` is the signed defect:
//   identity  -- the offending entry itself (diagonal nonzero, or an
//                off-diagonal entry that is not clearly positive),
//   symmetry  -- dist(i,j) - dist(j,i),
//   triangle  -- dist(i,j) - dist(i,k) - dist(k,j), positive means broken.
struct MetricViolation {
  MetricAxiom axiom;
  std::array<int, 3> where;
  double slack;
};

struct MetricValidationReport {
  bool ok = false;
  double tol = 0.0;
  std::vector<MetricViolation> violations;
};

// Checks all three axiom families within an additive tolerance and reports
// every violation in deterministic order (identity, symmetry, triangle,
// each lexicographic by index). Off-diagonal entries must exceed tol: at
// tolerance tol two points closer than that are indistinguishable.
inline MetricValidationReport validate_metric(const FiniteMetricSpace& space, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("validation tolerance must be nonnegative");
  MetricValidationReport report;
  report.tol = tol;
  const int n = space.size();

  for (int i = 0; i < n; ++i) {
    const double dii = space.dist(i, i);
    if (std::abs(dii) > tol)
      report.violations.push_back({MetricAxiom::Identity, {i, i, -1}, dii});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && space.dist(i, j) <= tol)
        report.violations.push_back({MetricAxiom::Identity, {i, j, -1}, space.dist(i, j)});

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double gap = space.dist(i, j) - space.dist(j, i);
      if (std::abs(gap) > tol)
        report.violations.push_back({MetricAxiom::Symmetry, {i, j, -1}, gap});
    }

  // Upper-triangle endpoints, every intermediate point. Asymmetric inputs
  // are already flagged above, so checking dist(i,j) once per {i,j} is enough.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double slack = space.dist(i, j) - space.dist(i, k) - space.dist(k, j);
        if (slack > tol)
          report.violations.push_back({MetricAxiom::Triangle, {i, j, k}, slack});
      }

  report.ok = report.violations.empty();
  return report;
}

inline MetricValidationReport validate_metric(const FiniteMetricSpace& space) {
  return validate_metric(space, detail::kDefaultRelTol * space.max_distance());
}

// Sum of the three pairwise distances of a triangle, computed through the
// canonical sorted sum so all index orders give the same double.
inline double perimeter(const FiniteMetricSpace& space, int i, int j, int k) {
  const int n = space.size();
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
    throw std::invalid_argument("perimeter: point index out of range");
  if (i == j || j == k || i == k)
    throw std::invalid_argument("perimeter: triple must have three distinct points");
  return detail::sorted_sum3(space.dist(i, j), space.dist(j, k), space.dist(i, k));
}

struct Triple {
  int i, j, k;  // always i < j < k
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline std::uint64_t pair_count(int n) {
  if (n < 2) return 0;
  return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
}

inline std::uint64_t triple_count(int n) {
  if (n < 3) return 0;
  return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) *
         static_cast<std::uint64_t>(n - 2) / 6;
}

// Lexicographic rank -> (i,j,k) with i<j<k over n points. Cheap linear
// scan; used only to seed chunk starts, iteration itself is an odometer.
inline Triple unrank_triple(std::uint64_t rank, int n) {
  if (rank >= triple_count(n)) throw std::out_of_range("triple rank out of range");
  int i = 0;
  while (true) {
    const std::uint64_t block = pair_count(n - 1 - i);
    if (rank < block) break;
    rank -= block;
    ++i;
  }
  int j = i + 1;
  while (true) {
    const std::uint64_t block = static_cast<std::uint64_t>(n - 1 - j);
    if (rank < block) break;
    rank -= block;
    ++j;
  }
  return {i, j, static_cast<int>(j + 1 + rank)};
}

inline std::pair<int, int> unrank_pair(std::uint64_t rank, int n) {
  if (rank >= pair_count(n)) throw std::out_of_range("pair rank out of range");
  int i = 0;
  while (true) {
    const std::uint64_t block = static_cast<std::uint64_t>(n - 1 - i);
    if (rank < block) break;
    rank -= block;
    ++i;
  }
  return {i, static_cast<int>(i + 1 + rank)};
}

inline bool advance_triple(Triple& t, int n) {
  if (t.k + 1 < n) { ++t.k; return true; }
  if (t.j + 2 < n) { ++t.j; t.k = t.j + 1; return true; }
  if (t.i + 3 < n) { ++t.i; t.j = t.i + 1; t.k = t.j + 1; return true; }
  return false;
}

// Streaming range over all index triples i<j<k in lexicographic order.
// Supports partitioning into disjoint rank ranges for parallel consumers.
class TripleRange {
 public:
  explicit TripleRange(int n) : n_(n), begin_rank_(0), end_rank_(triple_count(n)) {}
  TripleRange(int n, std::uint64_t begin_rank, std::uint64_t end_rank)
      : n_(n), begin_rank_(begin_rank), end_rank_(end_rank) {
    if (begin_rank_ > end_rank_ || end_rank_ > triple_count(n))
      throw std::out_of_range("triple range bounds out of range");
  }

  class iterator {
   public:
    using value_type = Triple;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;
    using pointer = const Triple*;
    using reference = const Triple&;

    iterator() : n_(0), rank_(0), t_{0, 1, 2} {}
    iterator(int n, std::uint64_t rank) : n_(n), rank_(rank), t_{0, 1, 2} {
      if (rank_ < triple_count(n_)) t_ = unrank_triple(rank_, n_);
    }

    reference operator*() const { return t_; }
    pointer operator->() const { return &t_; }
    iterator& operator++() {
      ++rank_;
      advance_triple(t_, n_);
      return *this;
    }
    iterator operator++(int) { iterator old = *this; ++(*this); return old; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.rank_ == b.rank_; }

   private:
    int n_;
    std::uint64_t rank_;
    Triple t_;
  };

  iterator begin() const { return {n_, begin_rank_}; }
  iterator end() const { return {n_, end_rank_}; }
  std::uint64_t size() const { return end_rank_ - begin_rank_; }

 private:
  int n_;
  std::uint64_t begin_rank_;
  std::uint64_t end_rank_;
};

inline TripleRange enumerate_triples(const FiniteMetricSpace& space) {
  return TripleRange(space.size());
}

}  // namespace perimetric

#endif  // PERIMETRIC_METRIC_SPACE_HPP
