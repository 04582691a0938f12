#pragma once

#include <cstddef>
#include <vector>

#include "ud/vec.hpp"

namespace ud {

enum class SetKind { SINGLETON, FINITE, PROXY };

// A nonempty finite list of candidate global minimizers. PROXY marks a point
// estimated from the tail of a long run rather than a known minimizer.
struct SolutionSet {
  std::vector<Vec> points;
  SetKind kind = SetKind::FINITE;

  std::size_t dimension() const { return points.empty() ? 0 : points[0].size(); }
};

SolutionSet singleton(Vec point);

struct Projection {
  Vec point;          // the chosen nearest point x_p
  std::size_t index;  // its position in SolutionSet::points
  double dist_sq;     // squared distance to x, minimal over the set
};

// Nearest point in the set; equidistant ties break toward the lowest list
// index so the selection is deterministic.
Projection project(const Vec& x, const SolutionSet& set);

double distance_sq(const Vec& x, const SolutionSet& set);

}  // namespace ud
