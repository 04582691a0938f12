#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ud/error.hpp"

namespace ud {

// Optimizer state x in R^d. Coordinates must stay finite; dimension is fixed
// per problem instance.
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// y = y - gamma * g
inline void step_in_place(Vec& y, double gamma, const Vec& g) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= gamma * g[i];
}

inline bool all_finite(const Vec& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline void require_dimension(const Vec& x, std::size_t d, const char* what) {
  if (x.size() != d) {
    throw Error(ErrorCode::DIMENSION_MISMATCH, what);
  }
}

}  // namespace ud
