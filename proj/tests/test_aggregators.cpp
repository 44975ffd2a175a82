#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "perimetric/aggregators.hpp"

using namespace perimetric;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("sum and qnorm basics") {
  const auto sum = TripleAggregator::sum();
  REQUIRE(evaluate(sum, 1.0, 2.0, 3.0) == 6.0);
  REQUIRE(evaluate(sum, 0.0, 0.0, 0.0) == 0.0);

  const auto q2 = TripleAggregator::qnorm(2.0);
  REQUIRE(evaluate(q2, 3.0, 4.0, 0.0) == 5.0);  // the 3-4-5 triangle, exactly
  REQUIRE(evaluate(q2, 0.0, 0.0, 0.0) == 0.0);
  REQUIRE_THAT(evaluate(q2, 1.0, 1.0, 1.0), WithinRel(std::sqrt(3.0), 1e-15));
}

TEST_CASE("qnorm stays finite on huge arguments") {
  const auto q3 = TripleAggregator::qnorm(3.0);
  const double v = evaluate(q3, 1e300, 1e300, 1e300);
  REQUIRE(std::isfinite(v));
  REQUIRE_THAT(v, WithinRel(1e300 * std::pow(3.0, 1.0 / 3.0), 1e-12));
}

TEST_CASE("qnorm with q = 1 equals the sum within rounding") {
  const auto q1 = TripleAggregator::qnorm(1.0);
  const auto sum = TripleAggregator::sum();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 10.0;
    const double b = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 10.0;
    const double c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 10.0;
    const double s = evaluate(sum, a, b, c);
    if (s == 0.0) continue;
    REQUIRE_THAT(evaluate(q1, a, b, c), WithinRel(s, 1e-12));
  }
}

TEST_CASE("qnorm decreases as q grows") {
  const auto q1 = TripleAggregator::qnorm(1.0);
  const auto q15 = TripleAggregator::qnorm(1.5);
  const auto q2 = TripleAggregator::qnorm(2.0);
  const auto q3 = TripleAggregator::qnorm(3.0);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 5.0;
    const double b = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 5.0;
    const double c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 5.0;
    const double v1 = evaluate(q1, a, b, c);
    const double v15 = evaluate(q15, a, b, c);
    const double v2 = evaluate(q2, a, b, c);
    const double v3 = evaluate(q3, a, b, c);
    const double slop = 1e-12 * (v1 + 1.0);
    REQUIRE(v15 <= v1 + slop);
    REQUIRE(v2 <= v15 + slop);
    REQUIRE(v3 <= v2 + slop);
    REQUIRE(v3 >= std::max({a, b, c}) - slop);
  }
}

TEST_CASE("evaluation is permutation-invariant, bit for bit") {
  const std::vector<TripleAggregator> aggs = {
      TripleAggregator::sum(),
      TripleAggregator::qnorm(2.0),
      TripleAggregator::qnorm(3.5),
      TripleAggregator::phi_mean({PhiSpec::Kind::Square, 2.0}),
      TripleAggregator::phi_mean({PhiSpec::Kind::Expm1, 0.0}),
      TripleAggregator::phi_mean({PhiSpec::Kind::Power, 2.5}),
      TripleAggregator::sum_pair(TripleAggregator::sum(), TripleAggregator::qnorm(2.0)),
  };
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 3.0;
    const double b = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 3.0;
    const double c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 3.0;
    const std::array<std::array<double, 3>, 6> perms{
        {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
    for (const auto& agg : aggs) {
      const double base = evaluate(agg, a, b, c);
      for (const auto& p : perms) REQUIRE(evaluate(agg, p[0], p[1], p[2]) == base);
    }
  }
}

TEST_CASE("phi means dominate the plain sum") {
  // Convex phi with phi(0) = 0 pushes the mean up (Jensen), so the
  // phi-mean of three values can never drop below their sum.
  const std::vector<TripleAggregator> means = {
      TripleAggregator::phi_mean({PhiSpec::Kind::Square, 2.0}),
      TripleAggregator::phi_mean({PhiSpec::Kind::Expm1, 0.0}),
      TripleAggregator::phi_mean({PhiSpec::Kind::Power, 3.0}),
  };
  const auto sum = TripleAggregator::sum();
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0;
    const double b = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0;
    const double c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0;
    const double s = evaluate(sum, a, b, c);
    for (const auto& m : means) REQUIRE(evaluate(m, a, b, c) >= s * (1.0 - 1e-12));
  }
  // Exact on an equal triple: 3 * phi^{-1}(phi(t)) = 3t.
  REQUIRE_THAT(evaluate(means[0], 1.0, 1.0, 1.0), WithinRel(3.0, 1e-15));
}

TEST_CASE("domain errors") {
  const auto sum = TripleAggregator::sum();
  REQUIRE_THROWS_AS(evaluate(sum, -1.0, 0.0, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(evaluate(sum, 0.0, std::nan(""), 0.0), std::domain_error);
  REQUIRE_THROWS_AS(evaluate(sum, 0.0, 0.0, std::numeric_limits<double>::infinity()),
                    std::domain_error);
  REQUIRE_THROWS_AS(TripleAggregator::qnorm(0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(TripleAggregator::qnorm(std::nan("")), std::invalid_argument);
  REQUIRE_THROWS_AS(TripleAggregator::phi_mean({PhiSpec::Kind::Power, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("spec strings round-trip through the parser") {
  const std::vector<std::string> specs = {
      "sum",
      "qnorm:2",
      "qnorm:1.5",
      "phimean:square",
      "phimean:expm1",
      "phimean:power:2.5",
      "sumpair:sum,qnorm:2",
      "sumpair:phimean:square,sumpair:sum,sum",
  };
  for (const std::string& spec : specs) {
    const TripleAggregator a = parse_aggregator(spec);
    REQUIRE(a.spec_string() == spec);
    const TripleAggregator b = parse_aggregator(a.spec_string());
    // Same spec, same value.
    REQUIRE(evaluate(a, 0.3, 0.7, 1.1) == evaluate(b, 0.3, 0.7, 1.1));
  }
}

TEST_CASE("parser rejects malformed specs with a pointed message") {
  REQUIRE_THROWS_WITH(parse_aggregator(""), ContainsSubstring("unknown aggregator"));
  REQUIRE_THROWS_WITH(parse_aggregator("qnorm:"), ContainsSubstring("number"));
  REQUIRE_THROWS_WITH(parse_aggregator("sum junk"), ContainsSubstring("trailing"));
  REQUIRE_THROWS_WITH(parse_aggregator("phimean:cube"),
                      ContainsSubstring("square, expm1, or power"));
  REQUIRE_THROWS_WITH(parse_aggregator("sumpair:sum"), ContainsSubstring("comma"));
  REQUIRE_THROWS_AS(parse_aggregator("qnorm:0.3"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_aggregator("max"), std::invalid_argument);
}

TEST_CASE("sumpair evaluates as the sum of its parts") {
  const auto pair = TripleAggregator::sum_pair(TripleAggregator::sum(),
                                               TripleAggregator::qnorm(2.0));
  const double lhs = evaluate(TripleAggregator::sum(), 1.0, 2.0, 2.0);
  const double rhs = evaluate(TripleAggregator::qnorm(2.0), 1.0, 2.0, 2.0);
  REQUIRE(evaluate(pair, 1.0, 2.0, 2.0) == lhs + rhs);
}

TEST_CASE("admissible pair: sum over qnorm") {
  const std::vector<double> grid = uniform_grid(2.0, 0.1);
  REQUIRE(grid.size() == 21);
  REQUIRE(grid.front() == 0.0);
  for (double q : {1.0, 1.5, 2.0, 3.0}) {
    const auto report = check_admissible_pair(TripleAggregator::sum(),
                                              TripleAggregator::qnorm(q), grid);
    INFO("q = " << q);
    REQUIRE(report.symmetric.ok);
    REQUIRE(report.g_dominates_argument.ok);
    REQUIRE(report.f_dominates_g.ok);
    REQUIRE(report.g_vanishes_at_origin.ok);
    REQUIRE(report.g_monotone.ok);
    REQUIRE(report.admissible);
  }
}

TEST_CASE("phi-mean over sum satisfies the domination condition") {
  const std::vector<double> grid = uniform_grid(2.0, 0.1);
  const auto report = check_admissible_pair(
      TripleAggregator::phi_mean({PhiSpec::Kind::Square, 2.0}),
      TripleAggregator::sum(), grid);
  REQUIRE(report.f_dominates_g.ok);
  REQUIRE(report.admissible);
}

TEST_CASE("swapped roles fail domination with the first counterexample") {
  // qnorm <= sum pointwise, so putting qnorm on top cannot dominate.
  const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
  const auto report = check_admissible_pair(TripleAggregator::qnorm(2.0),
                                            TripleAggregator::sum(), grid);
  REQUIRE_FALSE(report.f_dominates_g.ok);
  REQUIRE_FALSE(report.admissible);
  REQUIRE(report.f_dominates_g.witness == std::array<double, 3>{0.0, 0.5, 0.5});
  REQUIRE(report.f_dominates_g.lhs == 1.0);  // G = sum
  REQUIRE_THAT(report.f_dominates_g.rhs, WithinRel(0.5 * std::sqrt(2.0), 1e-15));
}

TEST_CASE("condition K holds only when the grid is nearly flat") {
  const auto q2 = TripleAggregator::qnorm(2.0);
  const double K = std::sqrt(3.0);

  // Equal distances: G(t,t,t) = sqrt(3) t = K t. Exact equality must pass
  // through the relative slack.
  REQUIRE(check_condition_K(q2, K, {1.0}).ok);
  REQUIRE(check_condition_K(q2, K, {0.25, 0.25}).ok);

  // Two distinct values break it, witnessed at the first mixed triple.
  const auto bad = check_condition_K(q2, K, {1.0, 2.0});
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.witness == std::array<double, 3>{1.0, 1.0, 2.0});
  REQUIRE_THAT(bad.lhs, WithinRel(std::sqrt(6.0), 1e-15));
  REQUIRE_THAT(bad.rhs, WithinRel(K, 1e-15));

  // A looser constant absorbs the spread: sqrt(1 + 4 + 4) = 3 <= 3 * 1.
  REQUIRE(check_condition_K(q2, 3.0, {1.0, 2.0}).ok);
  REQUIRE_THROWS_AS(check_condition_K(q2, 0.0, {1.0}), std::invalid_argument);
}

TEST_CASE("condition k0 bounds the isosceles degenerate triple") {
  const auto q2 = TripleAggregator::qnorm(2.0);
  // G(t,t,0) = sqrt(2) t: the exact constant passes, anything smaller fails.
  REQUIRE(check_condition_k0(q2, std::sqrt(2.0), {0.5, 1.0, 2.0}).ok);
  const auto bad = check_condition_k0(q2, 1.4, {0.5, 1.0, 2.0});
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.witness == std::array<double, 3>{0.5, 0.5, 0.0});

  const auto sum = TripleAggregator::sum();
  REQUIRE(check_condition_k0(sum, 2.0, {0.5, 1.0}).ok);
}

TEST_CASE("admissibility report carries optional side conditions") {
  const std::vector<double> grid = {0.0, 1.0};
  const auto report = check_admissible_pair(TripleAggregator::sum(),
                                            TripleAggregator::qnorm(2.0), grid,
                                            1e-12, std::sqrt(3.0), std::sqrt(2.0));
  REQUIRE(report.admissible);
  REQUIRE(report.K.has_value());
  REQUIRE(report.condition_K.has_value());
  REQUIRE(report.k0.has_value());
  REQUIRE(report.condition_k0.has_value());
  REQUIRE(report.condition_k0->ok);
}

TEST_CASE("grid plumbing") {
  REQUIRE_THROWS_AS(check_condition_K(TripleAggregator::qnorm(2.0), 1.0, {}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      check_admissible_pair(TripleAggregator::sum(), TripleAggregator::qnorm(2.0), {1.0, 2.0}),
      std::invalid_argument);  // grid must contain 0
  REQUIRE_THROWS_AS(check_condition_K(TripleAggregator::qnorm(2.0), 1.0, {-1.0, 1.0}),
                    std::invalid_argument);
  const std::vector<double> g = uniform_grid(1.0, 0.25);
  REQUIRE(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  REQUIRE_THROWS_AS(uniform_grid(0.0, 0.1), std::invalid_argument);
}
