#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "ud/problem.hpp"

namespace ud {

// Progress functions P(x; S~) measuring proximity to the solution set:
//   GAP               f(x) - fstar
//   STRONG_GAP        f(x) - fstar + (mu/2) ||x - x_p||^2
//   GRAD_NORM_OVER_L  ||grad f(x)||^2 / L
//   GAP_PLUS_GRAD     f(x) - fstar + ||grad f(x)||^2 / (2L)
//   AIMING_VALUE      f(x), with fstar = 0 implied
//   SAMPLE_GAP        f_xi(x) - f_xi(x_p)
//   SAMPLE_GRAD_NORM  ||grad f_xi(x)||^2 / L, or raw when raw_grad_norm is set
enum class ProgressKind {
  GAP,
  STRONG_GAP,
  GRAD_NORM_OVER_L,
  GAP_PLUS_GRAD,
  AIMING_VALUE,
  SAMPLE_GAP,
  SAMPLE_GRAD_NORM,
};

const char* to_string(ProgressKind kind) noexcept;
ProgressKind progress_kind_from_string(const std::string& name);
bool is_sample_kind(ProgressKind kind) noexcept;

struct ProgressSpec {
  ProgressKind kind = ProgressKind::GAP;
  std::optional<double> fstar;
  std::optional<double> mu;
  std::optional<double> L;
  // When set for SAMPLE_GRAD_NORM, P = ||grad f_xi||^2 without the 1/L factor
  // (c1 then absorbs L).
  bool raw_grad_norm = false;
};

// Deterministic kinds only. Values in [-1e-12, 0) clamp to zero; anything
// below that signals a wrong fstar and throws NEGATIVE_GAP.
double eval_progress(const ProgressSpec& spec, const Problem& problem,
                     const Vec& x, const SolutionSet& set);

// Sample kinds only. SAMPLE_GAP may legitimately come back negative (x_p
// minimizes f, not f_xi); such values are returned as-is and counted by the
// certification layer.
double eval_sample_progress(const ProgressSpec& spec, const Problem& problem,
                            std::size_t sample_id, const Vec& x,
                            const SolutionSet& set);

// Batch-mean analog of eval_sample_progress used by the SGD loop and the
// trajectory checks; a batch acts as a single draw from the product
// distribution.
double eval_batch_progress(const ProgressSpec& spec, const Problem& problem,
                           std::span<const std::uint32_t> ids, const Vec& x,
                           const SolutionSet& set);

}  // namespace ud
