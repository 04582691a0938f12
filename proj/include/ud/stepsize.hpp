#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace ud {

// Stepsize rules (gnsq = ||g||^2 at the current point):
//   CONSTANT           gamma
//   POLYAK             c1 (f(x) - fstar) / gnsq
//   POLYAK_LB          c1 (f(x) - lstar) / gnsq, lstar <= fstar
//   DECREASING_POLYAK  (1/c^k) min{ c1 (f(x) - lstar)/gnsq, gamma^{k-1} c^{k-1} }
//                      with c^k = sqrt(k+1), c^{-1} = c^0, gamma^{-1} = gamma0
// Any rule may additionally carry a cap gamma_b, in which case the produced
// step is min{base, gamma_b}. The config schema keeps the cap as a plain
// field, so "capped X" is X with cap set rather than a wrapper object.
enum class PolicyKind { CONSTANT, POLYAK, POLYAK_LB, DECREASING_POLYAK };

const char* to_string(PolicyKind kind) noexcept;
PolicyKind policy_kind_from_string(const std::string& name);

struct StepsizePolicy {
  PolicyKind kind = PolicyKind::POLYAK;
  double gamma = 0.0;   // CONSTANT
  double c1 = 1.0;      // Polyak family
  double fstar = 0.0;   // POLYAK
  double lstar = 0.0;   // POLYAK_LB, DECREASING_POLYAK
  // DECREASING_POLYAK initial gamma^{-1}; when unset, the first Polyak-LB
  // value is used so the min starts inactive.
  std::optional<double> gamma0;
  std::optional<double> cap;  // gamma_b
  double grad_floor = 1e-12;  // degenerate-gradient threshold on ||g||
};

StepsizePolicy capped(StepsizePolicy inner, double gamma_b);

// CONSTANT, POLYAK and POLYAK_LB are stateless; DECREASING_POLYAK threads its
// gamma^{k-1} through prev_gamma, so a policy instance serves one run at a
// time.
struct StepContext {
  std::size_t k = 0;
  double fx = 0.0;            // f or batch-mean f_xi at x
  double grad_norm_sq = 0.0;  // of the gradient driving the update
  std::optional<double> prev_gamma;
};

// Throws DEGENERATE_GRADIENT when grad_norm_sq < grad_floor^2 (the caller
// must terminate the run, not step) and NEGATIVE_GAP when fx undercuts the
// policy's reference value by more than 1e-12.
double compute_step(const StepsizePolicy& policy, const StepContext& ctx);

// Largest stepsize the descent analysis admits at a point:
//   (2 - alpha) (inner_product + c2 + beta) / grad_norm_sq.
// May be <= 0 when the numerator is negative; the caller flags such points
// instead of stepping.
double max_admissible_step(double inner_product, double grad_norm_sq,
                           double alpha, double beta, double c2);

}  // namespace ud
