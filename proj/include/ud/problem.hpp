#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ud/geometry.hpp"
#include "ud/vec.hpp"

namespace ud {

// A differentiable objective, optionally decomposed into sample terms so
// f(x) equals the arithmetic mean of sample_value over all samples. Problems
// are immutable after construction and safe to share across runs.
struct Problem {
  std::string name;
  std::size_t dimension = 1;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;

  std::size_t sample_count = 0;  // 0 = deterministic only
  std::function<double(std::size_t, const Vec&)> sample_value;
  std::function<Vec(std::size_t, const Vec&)> sample_gradient;

  std::optional<SolutionSet> known_minimizers;
  std::optional<double> known_fstar;
  std::optional<double> known_smoothness_L;
  std::vector<double> known_sample_lower_bounds;  // f_xi lower bound per sample
};

struct BatchEval {
  double f = 0.0;
  Vec grad;
};

// Mean loss and mean gradient over the given sample ids, accumulated in id
// order. The full-problem value/gradient of sample-backed problems route
// through this same helper, so a full-range batch reproduces them bitwise.
BatchEval batch_eval(const Problem& problem, std::span<const std::uint32_t> ids,
                     const Vec& x);

// Mean of the per-sample lower bounds over a batch (0 when none are known).
double batch_lower_bound(const Problem& problem,
                         std::span<const std::uint32_t> ids);

// Central-difference gradient, one evaluation pair per coordinate. This is a
// verification oracle for analytic gradients, not an optimization tool.
Vec finite_difference_gradient(const Problem& problem, const Vec& x, double h);

}  // namespace ud
