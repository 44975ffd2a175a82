#ifndef PERIMETRIC_AGGREGATORS_HPP
#define PERIMETRIC_AGGREGATORS_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "perimetric/detail/numeric.hpp"

namespace perimetric {

// Generator function for the power-mean family: continuous, strictly
// increasing, convex, with phi(0) = 0. Those properties are what make
// 3*phi^{-1}(mean of phi) dominate the plain sum (Jensen).
struct PhiSpec {
  enum class Kind { Square, Power, Expm1 };
  Kind kind = Kind::Square;
  double p = 2.0;  // exponent, Power only; must be > 1

  double forward(double t) const {
    switch (kind) {
      case Kind::Square: return t * t;
      case Kind::Power: return std::pow(t, p);
      case Kind::Expm1: return std::expm1(t);
    }
    return 0.0;
  }

  double inverse(double u) const {
    switch (kind) {
      case Kind::Square: return std::sqrt(u);
      case Kind::Power: return std::pow(u, 1.0 / p);
      case Kind::Expm1: return std::log1p(u);
    }
    return 0.0;
  }

  std::string spec_string() const {
    switch (kind) {
      case Kind::Square: return "square";
      case Kind::Expm1: return "expm1";
      case Kind::Power: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "power:%g", p);
        return buf;
      }
    }
    return "?";
  }
};

// Symmetric aggregator of three nonnegative reals. The family is closed
// under pairwise addition, so SumPair keeps immutable shared children.
class TripleAggregator {
 public:
  enum class Kind { Sum, QNorm, PhiMean, SumPair };

  static TripleAggregator sum() { return TripleAggregator(Kind::Sum); }

  static TripleAggregator qnorm(double q) {
    if (!(q >= 1.0) || !std::isfinite(q))
      throw std::invalid_argument("qnorm exponent must be a finite value >= 1");
    TripleAggregator a(Kind::QNorm);
    a.q_ = q;
    return a;
  }

  static TripleAggregator phi_mean(PhiSpec phi) {
    if (phi.kind == PhiSpec::Kind::Power && (!(phi.p > 1.0) || !std::isfinite(phi.p)))
      throw std::invalid_argument("phimean power exponent must be a finite value > 1");
    TripleAggregator a(Kind::PhiMean);
    a.phi_ = phi;
    return a;
  }

  static TripleAggregator sum_pair(TripleAggregator g, TripleAggregator h) {
    TripleAggregator a(Kind::SumPair);
    a.lhs_ = std::make_shared<TripleAggregator>(std::move(g));
    a.rhs_ = std::make_shared<TripleAggregator>(std::move(h));
    return a;
  }

  Kind kind() const { return kind_; }
  double q() const { return q_; }
  const PhiSpec& phi() const { return phi_; }
  const TripleAggregator& lhs() const { return *lhs_; }
  const TripleAggregator& rhs() const { return *rhs_; }

  std::string spec_string() const {
    switch (kind_) {
      case Kind::Sum: return "sum";
      case Kind::QNorm: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "qnorm:%g", q_);
        return buf;
      }
      case Kind::PhiMean: return "phimean:" + phi_.spec_string();
      case Kind::SumPair: return "sumpair:" + lhs_->spec_string() + "," + rhs_->spec_string();
    }
    return "?";
  }

 private:
  explicit TripleAggregator(Kind k) : kind_(k) {}

  Kind kind_;
  double q_ = 1.0;
  PhiSpec phi_{};
  std::shared_ptr<const TripleAggregator> lhs_, rhs_;
};

// Evaluate on three nonnegative reals. Arguments are sorted ascending
// first, which makes symmetry exact: every permutation hits the identical
// sequence of floating point operations.
inline double evaluate(const TripleAggregator& agg, double xi, double eta, double zeta) {
  if (!std::isfinite(xi) || !std::isfinite(eta) || !std::isfinite(zeta))
    throw std::domain_error("aggregator argument is not finite");
  if (xi < 0.0 || eta < 0.0 || zeta < 0.0)
    throw std::domain_error("aggregator argument is negative");
  detail::sort3(xi, eta, zeta);

  switch (agg.kind()) {
    case TripleAggregator::Kind::Sum:
      return (xi + eta) + zeta;
    case TripleAggregator::Kind::QNorm: {
      if (zeta == 0.0) return 0.0;
      // Factor out the largest argument so big exponents cannot overflow.
      const double ra = xi / zeta, rb = eta / zeta;
      const double s = (std::pow(ra, agg.q()) + std::pow(rb, agg.q())) + 1.0;
      return zeta * std::pow(s, 1.0 / agg.q());
    }
    case TripleAggregator::Kind::PhiMean: {
      const PhiSpec& phi = agg.phi();
      const double m = ((phi.forward(xi) + phi.forward(eta)) + phi.forward(zeta)) / 3.0;
      return 3.0 * phi.inverse(m);
    }
    case TripleAggregator::Kind::SumPair:
      return evaluate(agg.lhs(), xi, eta, zeta) + evaluate(agg.rhs(), xi, eta, zeta);
  }
  throw std::logic_error("unreachable aggregator kind");
}

// ---------------------------------------------------------------------------
// Spec strings:  sum | qnorm:<q> | phimean:square | phimean:power:<p> |
//                phimean:expm1 | sumpair:<spec>,<spec>
// ---------------------------------------------------------------------------

namespace detail {

inline double parse_number(std::string_view s, std::size_t& pos, const char* what) {
  double value = 0.0;
  const char* begin = s.data() + pos;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin)
    throw std::invalid_argument(std::string("aggregator spec: expected a number for ") + what);
  pos += static_cast<std::size_t>(ptr - begin);
  return value;
}

inline bool consume(std::string_view s, std::size_t& pos, std::string_view token) {
  if (s.substr(pos, token.size()) == token) {
    pos += token.size();
    return true;
  }
  return false;
}

inline TripleAggregator parse_spec(std::string_view s, std::size_t& pos) {
  if (consume(s, pos, "sumpair:")) {
    TripleAggregator g = parse_spec(s, pos);
    if (pos >= s.size() || s[pos] != ',')
      throw std::invalid_argument("aggregator spec: sumpair needs two comma-separated parts");
    ++pos;
    TripleAggregator h = parse_spec(s, pos);
    return TripleAggregator::sum_pair(std::move(g), std::move(h));
  }
  if (consume(s, pos, "sum")) return TripleAggregator::sum();
  if (consume(s, pos, "qnorm:")) return TripleAggregator::qnorm(parse_number(s, pos, "qnorm exponent"));
  if (consume(s, pos, "phimean:")) {
    if (consume(s, pos, "square")) return TripleAggregator::phi_mean({PhiSpec::Kind::Square, 2.0});
    if (consume(s, pos, "expm1")) return TripleAggregator::phi_mean({PhiSpec::Kind::Expm1, 0.0});
    if (consume(s, pos, "power:"))
      return TripleAggregator::phi_mean({PhiSpec::Kind::Power, parse_number(s, pos, "phimean exponent")});
    throw std::invalid_argument("aggregator spec: phimean variant must be square, expm1, or power:<p>");
  }
  throw std::invalid_argument("aggregator spec: unknown aggregator at '" + std::string(s.substr(pos)) + "'");
}

}  // namespace detail

inline TripleAggregator parse_aggregator(std::string_view spec) {
  std::size_t pos = 0;
  TripleAggregator a = detail::parse_spec(spec, pos);
  if (pos != spec.size())
    throw std::invalid_argument("aggregator spec: trailing characters '" + std::string(spec.substr(pos)) + "'");
  return a;
}

// ---------------------------------------------------------------------------
// Admissibility of an (F, G) pair, checked on a finite grid of values.
// ---------------------------------------------------------------------------

// Verdict for one condition. On failure `witness` holds the first
// counterexample triple in canonical sweep order (values ascending) and
// lhs/rhs the two compared quantities (the violated inequality is lhs <= rhs
// unless noted on the report field).
struct ConditionVerdict {
  bool ok = true;
  std::array<double, 3> witness{0.0, 0.0, 0.0};
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AdmissibilityReport {
  ConditionVerdict symmetric;             // F and G permutation-invariant (bit-exact)
  ConditionVerdict g_dominates_argument;  // G(a,b,c) >= each argument
  ConditionVerdict f_dominates_g;         // F >= G pointwise
  ConditionVerdict g_vanishes_at_origin;  // G(0,0,0) = 0 and small near 0
  ConditionVerdict g_monotone;            // G nondecreasing in each argument
  std::optional<double> K;                // G <= K * (smallest argument), if requested
  std::optional<ConditionVerdict> condition_K;
  std::optional<double> k0;               // G(t,t,0) <= k0 * t, if requested
  std::optional<ConditionVerdict> condition_k0;
  bool admissible = false;                // the five core conditions all hold
};

namespace detail {

inline std::vector<double> canonical_grid(std::vector<double> grid, bool require_zero) {
  if (grid.empty()) throw std::invalid_argument("admissibility grid is empty");
  for (double v : grid) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("admissibility grid values must be finite and nonnegative");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (require_zero && grid.front() != 0.0)
    throw std::invalid_argument("admissibility grid must contain 0");
  return grid;
}

// Visit canonical triples (g[a] <= g[b] <= g[c]) in lexicographic index
// order; stop early once `fn` returns false.
template <class Fn>
void for_each_canonical_triple(const std::vector<double>& g, Fn&& fn) {
  const int m = static_cast<int>(g.size());
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b)
      for (int c = b; c < m; ++c)
        if (!fn(a, b, c)) return;
}

}  // namespace detail

// G(t1,t2,t3) <= K * min(t1,t2,t3) on every grid triple. Stated per argument
// this would quantify over the first one; with symmetry that is the minimum.
// Comparison allows `rel` slack so exact-equality families (e.g. the q-norm
// on an equal triple against K = sqrt(3)) are not rounding-fragile.
inline ConditionVerdict check_condition_K(const TripleAggregator& G, double K,
                                          const std::vector<double>& grid,
                                          double rel = detail::kDefaultRelTol) {
  if (!(K > 0.0)) throw std::invalid_argument("condition-K constant must be positive");
  const std::vector<double> g = detail::canonical_grid(grid, /*require_zero=*/false);
  ConditionVerdict verdict;
  detail::for_each_canonical_triple(g, [&](int a, int b, int c) {
    const double value = evaluate(G, g[a], g[b], g[c]);
    const double bound = K * g[a];
    if (!detail::leq_rel(value, bound, rel)) {
      verdict = {false, {g[a], g[b], g[c]}, value, bound};
      return false;
    }
    return true;
  });
  return verdict;
}

// G(t,t,0) <= k0 * t on every grid value.
inline ConditionVerdict check_condition_k0(const TripleAggregator& G, double k0,
                                           const std::vector<double>& grid,
                                           double rel = detail::kDefaultRelTol) {
  if (!(k0 > 0.0)) throw std::invalid_argument("condition-k0 constant must be positive");
  const std::vector<double> g = detail::canonical_grid(grid, /*require_zero=*/false);
  ConditionVerdict verdict;
  for (double t : g) {
    const double value = evaluate(G, t, t, 0.0);
    const double bound = k0 * t;
    if (!detail::leq_rel(value, bound, rel)) {
      verdict = {false, {t, t, 0.0}, value, bound};
      return verdict;
    }
  }
  return verdict;
}

// The five defining conditions of an admissible (F, G) pair, verified on a
// grid that must include 0. Pass K and/or k0 to also record the two side
// conditions that upgrade a pair to perimeter- or pointwise-contraction.
inline AdmissibilityReport check_admissible_pair(const TripleAggregator& F,
                                                 const TripleAggregator& G,
                                                 const std::vector<double>& grid,
                                                 double rel = detail::kDefaultRelTol,
                                                 std::optional<double> K = std::nullopt,
                                                 std::optional<double> k0 = std::nullopt) {
  const std::vector<double> g = detail::canonical_grid(grid, /*require_zero=*/true);
  AdmissibilityReport report;

  // Permutation invariance, bit-exact across all six argument orders.
  detail::for_each_canonical_triple(g, [&](int a, int b, int c) {
    const std::array<std::array<double, 3>, 6> perms{{{g[a], g[b], g[c]},
                                                      {g[a], g[c], g[b]},
                                                      {g[b], g[a], g[c]},
                                                      {g[b], g[c], g[a]},
                                                      {g[c], g[a], g[b]},
                                                      {g[c], g[b], g[a]}}};
    for (const TripleAggregator* fn : {&F, &G}) {
      const double base = evaluate(*fn, perms[0][0], perms[0][1], perms[0][2]);
      for (const auto& p : perms) {
        const double v = evaluate(*fn, p[0], p[1], p[2]);
        if (v != base) {
          report.symmetric = {false, {g[a], g[b], g[c]}, v, base};
          return false;
        }
      }
    }
    return true;
  });

  detail::for_each_canonical_triple(g, [&](int a, int b, int c) {
    const double value = evaluate(G, g[a], g[b], g[c]);
    if (!detail::leq_rel(g[c], value, rel)) {  // g[c] is the largest argument
      report.g_dominates_argument = {false, {g[a], g[b], g[c]}, g[c], value};
      return false;
    }
    return true;
  });

  detail::for_each_canonical_triple(g, [&](int a, int b, int c) {
    const double gv = evaluate(G, g[a], g[b], g[c]);
    const double fv = evaluate(F, g[a], g[b], g[c]);
    if (!detail::leq_rel(gv, fv, rel)) {
      report.f_dominates_g = {false, {g[a], g[b], g[c]}, gv, fv};
      return false;
    }
    return true;
  });

  // Vanishing at the origin plus a finite continuity budget: on the smallest
  // positive grid value s, G(s,s,s) must stay below 10*s.
  {
    const double origin = evaluate(G, 0.0, 0.0, 0.0);
    if (!(std::abs(origin) <= rel)) {
      report.g_vanishes_at_origin = {false, {0.0, 0.0, 0.0}, origin, 0.0};
    } else if (g.size() > 1) {
      const double s = g[1];
      const double near = evaluate(G, s, s, s);
      if (!(near < 10.0 * s))
        report.g_vanishes_at_origin = {false, {s, s, s}, near, 10.0 * s};
    }
  }

  detail::for_each_canonical_triple(g, [&](int a, int b, int c) {
    const double base = evaluate(G, g[a], g[b], g[c]);
    const int m = static_cast<int>(g.size());
    const std::array<std::array<int, 3>, 3> bumped{{{a + 1, b, c}, {a, b + 1, c}, {a, b, c + 1}}};
    for (const auto& idx : bumped) {
      if (idx[0] >= m || idx[1] >= m || idx[2] >= m) continue;
      const double v = evaluate(G, g[idx[0]], g[idx[1]], g[idx[2]]);
      if (!detail::leq_rel(base, v, rel)) {
        report.g_monotone = {false, {g[a], g[b], g[c]}, v, base};
        return false;
      }
    }
    return true;
  });

  report.admissible = report.symmetric.ok && report.g_dominates_argument.ok &&
                      report.f_dominates_g.ok && report.g_vanishes_at_origin.ok &&
                      report.g_monotone.ok;

  if (K) {
    report.K = *K;
    report.condition_K = check_condition_K(G, *K, g, rel);
  }
  if (k0) {
    report.k0 = *k0;
    report.condition_k0 = check_condition_k0(G, *k0, g, rel);
  }
  return report;
}

// Evenly spaced default grid {0, step, 2*step, ..., hi}.
inline std::vector<double> uniform_grid(double hi, double step) {
  if (!(hi > 0.0) || !(step > 0.0)) throw std::invalid_argument("grid bounds must be positive");
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double v = i * step;
    if (v > hi * (1.0 + 1e-9)) break;
    g.push_back(v);
  }
  return g;
}

}  // namespace perimetric

#endif  // PERIMETRIC_AGGREGATORS_HPP
