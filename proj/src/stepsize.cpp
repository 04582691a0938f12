#include "ud/stepsize.hpp"

#include <algorithm>
#include <cmath>

#include "ud/error.hpp"

namespace ud {

namespace {

constexpr double kGapTol = 1e-12;

double checked_gap(double fx, double ref, const char* what) {
  const double gap = fx - ref;
  if (gap < -kGapTol) {
    throw Error(ErrorCode::NEGATIVE_GAP,
                std::string(what) + " exceeds f(x) by more than 1e-12");
  }
  return std::max(gap, 0.0);
}

}  // namespace

const char* to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::CONSTANT: return "constant";
    case PolicyKind::POLYAK: return "polyak";
    case PolicyKind::POLYAK_LB: return "polyak_lb";
    case PolicyKind::DECREASING_POLYAK: return "decreasing_polyak";
  }
  return "?";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  for (PolicyKind kind : {PolicyKind::CONSTANT, PolicyKind::POLYAK,
                          PolicyKind::POLYAK_LB, PolicyKind::DECREASING_POLYAK}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::CONFIG, "unknown stepsize policy: " + name);
}

StepsizePolicy capped(StepsizePolicy inner, double gamma_b) {
  if (!(gamma_b > 0.0)) throw Error(ErrorCode::CONFIG, "cap must be positive");
  inner.cap = gamma_b;
  return inner;
}

double compute_step(const StepsizePolicy& policy, const StepContext& ctx) {
  if (ctx.grad_norm_sq < policy.grad_floor * policy.grad_floor) {
    throw Error(ErrorCode::DEGENERATE_GRADIENT,
                "gradient norm below floor; terminate the run");
  }
  double base = 0.0;
  switch (policy.kind) {
    case PolicyKind::CONSTANT:
      base = policy.gamma;
      break;
    case PolicyKind::POLYAK:
      base = policy.c1 * checked_gap(ctx.fx, policy.fstar, "fstar") / ctx.grad_norm_sq;
      break;
    case PolicyKind::POLYAK_LB:
      base = policy.c1 * checked_gap(ctx.fx, policy.lstar, "lstar") / ctx.grad_norm_sq;
      break;
    case PolicyKind::DECREASING_POLYAK: {
      const double lb_step =
          policy.c1 * checked_gap(ctx.fx, policy.lstar, "lstar") / ctx.grad_norm_sq;
      // c^k = sqrt(k+1); c^{-1} = c^0 = 1, gamma^{-1} = gamma0.
      const double ck = std::sqrt(static_cast<double>(ctx.k + 1));
      const double ck_prev =
          ctx.k == 0 ? 1.0 : std::sqrt(static_cast<double>(ctx.k));
      const double prev = ctx.prev_gamma.has_value()
                              ? *ctx.prev_gamma
                              : policy.gamma0.value_or(lb_step);
      base = std::min(lb_step, prev * ck_prev) / ck;
      break;
    }
  }
  if (policy.cap) base = std::min(base, *policy.cap);
  return base;
}

double max_admissible_step(double inner_product, double grad_norm_sq,
                           double alpha, double beta, double c2) {
  if (!(grad_norm_sq > 0.0)) {
    throw Error(ErrorCode::CONFIG, "max_admissible_step needs grad_norm_sq > 0");
  }
  return (2.0 - alpha) * (inner_product + c2 + beta) / grad_norm_sq;
}

}  // namespace ud
