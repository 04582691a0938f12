#include "ud/problem.hpp"

#include "ud/error.hpp"

namespace ud {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CONFIG: return "CONFIG";
    case ErrorCode::DIMENSION_MISMATCH: return "DIMENSION_MISMATCH";
    case ErrorCode::DEGENERATE_GRADIENT: return "DEGENERATE_GRADIENT";
    case ErrorCode::NEGATIVE_GAP: return "NEGATIVE_GAP";
    case ErrorCode::MISSING_ITERATES: return "MISSING_ITERATES";
    case ErrorCode::INADMISSIBLE_STEP: return "INADMISSIBLE_STEP";
    case ErrorCode::HYPOTHESIS_VIOLATED: return "HYPOTHESIS_VIOLATED";
    case ErrorCode::BOUNDARY_MAX: return "BOUNDARY_MAX";
    case ErrorCode::INCONCLUSIVE: return "INCONCLUSIVE";
    case ErrorCode::IO: return "IO";
  }
  return "UNKNOWN";
}

BatchEval batch_eval(const Problem& problem, std::span<const std::uint32_t> ids,
                     const Vec& x) {
  if (problem.sample_count == 0) {
    throw Error(ErrorCode::CONFIG, "batch_eval needs a sample-decomposed problem");
  }
  if (ids.empty()) {
    throw Error(ErrorCode::CONFIG, "batch_eval needs a nonempty batch");
  }
  BatchEval out;
  out.grad.assign(x.size(), 0.0);
  for (std::uint32_t id : ids) {
    out.f += problem.sample_value(id, x);
    const Vec g = problem.sample_gradient(id, x);
    for (std::size_t j = 0; j < x.size(); ++j) out.grad[j] += g[j];
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  out.f *= inv;
  for (double& g : out.grad) g *= inv;
  return out;
}

double batch_lower_bound(const Problem& problem,
                         std::span<const std::uint32_t> ids) {
  if (problem.known_sample_lower_bounds.empty() || ids.empty()) return 0.0;
  double acc = 0.0;
  for (std::uint32_t id : ids) acc += problem.known_sample_lower_bounds[id];
  return acc / static_cast<double>(ids.size());
}

Vec finite_difference_gradient(const Problem& problem, const Vec& x, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorCode::CONFIG, "finite differences need h > 0");
  }
  Vec g(x.size());
  Vec probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    probe[i] = xi + h;
    const double fp = problem.value(probe);
    probe[i] = xi - h;
    const double fm = problem.value(probe);
    probe[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace ud
