#include "ud/geometry.hpp"

#include <utility>

#include "ud/error.hpp"

namespace ud {

SolutionSet singleton(Vec point) {
  SolutionSet set;
  set.points.push_back(std::move(point));
  set.kind = SetKind::SINGLETON;
  return set;
}

Projection project(const Vec& x, const SolutionSet& set) {
  if (set.points.empty()) {
    throw Error(ErrorCode::CONFIG, "solution set must be nonempty");
  }
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    require_dimension(set.points[i], x.size(), "project: dimension mismatch");
    const double d = norm_sq(sub(x, set.points[i]));
    if (best_d < 0.0 || d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return Projection{set.points[best], best, best_d};
}

double distance_sq(const Vec& x, const SolutionSet& set) {
  return project(x, set).dist_sq;
}

}  // namespace ud
