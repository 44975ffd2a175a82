#ifndef PERIMETRIC_DETAIL_NUMERIC_HPP
#define PERIMETRIC_DETAIL_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace perimetric {
namespace detail {

// Canonical three-term sum: sort ascending, then add left to right.
// Every symmetric quantity in the library (triangle perimeters, the Sum
// aggregator, q-norm accumulations) funnels through this so that all six
// argument orders produce the same double, bit for bit.
inline double sorted_sum3(double a, double b, double c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return (a + b) + c;
}

inline void sort3(double& a, double& b, double& c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
}

// lhs <= rhs up to a relative slack scaled by the larger magnitude.
// Used for admissibility comparisons where exact equality cases
// (e.g. G(t,t,t) against sqrt(3)*t) must not flip on a rounding ulp.
inline bool leq_rel(double lhs, double rhs, double rel) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return lhs <= rhs + rel * scale;
}

inline bool is_finite(double x) { return std::isfinite(x); }

constexpr double kDefaultRelTol = 1e-12;

}  // namespace detail
}  // namespace perimetric

#endif  // PERIMETRIC_DETAIL_NUMERIC_HPP
