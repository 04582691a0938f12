#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ud/optimizer.hpp"
#include "ud/problem.hpp"
#include "ud/progress.hpp"

namespace ud {

// Constants of the gradient-alignment inequality
//   <grad f(x), x - x_p>  >=  c1 P(x; S~) - c2
// together with the (alpha, beta) pair of the stepsize relation.
struct AssumptionParams {
  double c1 = 1.0;
  double c2 = 0.0;
  ProgressSpec progress;
  SolutionSet set;
  double alpha = 1.0;
  BetaSchedule beta;
};

// r(x) = c1 P(x; S~) - <g, x - x_p>, with g and P taken per-sample when a
// sample id is given. The inequality holds at x with constant c2 iff
// r(x) <= c2.
double residual_at(const Problem& problem, const Vec& x,
                   const AssumptionParams& params,
                   std::optional<std::size_t> sample_id = std::nullopt);

struct ResidualReport {
  double max_residual = 0.0;  // raw max of r over the probed points
  double mean_residual = 0.0;
  double empirical_c2 = 0.0;  // max(0, max_residual)
  double mean_c2 = 0.0;       // mean of max(0, r): the E[c2_xi] estimate
  std::size_t negative_progress_count = 0;
  std::size_t points = 0;
  std::vector<double> residuals;  // one per probed point, in step order
};

// Residuals along a recorded trajectory, re-evaluated under params.set (so a
// PROXY set can differ from the set the run used). Sample-kind progress uses
// each step's drawn batch; deterministic kinds also probe the terminal state.
// Requires recorded iterates.
ResidualReport trajectory_constants(const TrajectoryRecord& record,
                                    const Problem& problem,
                                    const AssumptionParams& params);

// Smallest constant certifying the inequality on [lo, hi] for a 1-D problem:
// max(0, sup r) located by a dense grid plus golden-section refinement.
// Throws BOUNDARY_MAX when the maximizer sits within tol of an endpoint,
// which means the interval cannot witness an interior supremum.
double global_c2_1d(const Problem& problem, const AssumptionParams& params,
                    double lo, double hi, double tol = 1e-6,
                    std::size_t grid_points = 100000);

enum class BoundName {
  THM1_DESCENT,
  THM1_MIN_P,
  COR1,
  COR2,
  COR3,
  THM2_DESCENT,
  THM2_MIN_P,
  COR4,
  COR5,
  EX2_LINEAR,
};

const char* to_string(BoundName name) noexcept;

struct BoundCheck {
  BoundName name = BoundName::THM1_DESCENT;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  bool skipped = false;  // inadmissible step: check is vacuous, not failed
  std::size_t k = 0;     // step index for per-step checks
  std::string note;
};

struct CheckTolerances {
  double rel = 1e-9;
  double abs = 1e-12;
};

// One descent inequality instance:
//   d(k+1)^2 <= d(k)^2 - alpha c1 gamma P + (2-alpha) beta gamma + 2 c2 gamma.
// The step must be admissible for (alpha, beta, c2); otherwise the check is
// reported as skipped.
struct DescentStepData {
  std::size_t k = 0;
  double dist_sq_before = 0.0;
  double dist_sq_after = 0.0;
  double gamma = 0.0;
  double grad_norm_sq = 0.0;
  double inner_prod = 0.0;
  double progress = 0.0;  // P or P_xi at x^k
  double beta = 0.0;
  bool stochastic = false;
};

BoundCheck check_descent_step(const DescentStepData& data,
                              const AssumptionParams& params,
                              const CheckTolerances& tol = {});

// Replays the record under params.set and runs the per-step descent check at
// every step. Requires recorded iterates.
std::vector<BoundCheck> check_descent_trajectory(const TrajectoryRecord& record,
                                                 const Problem& problem,
                                                 const AssumptionParams& params,
                                                 const CheckTolerances& tol = {});

// Extra constants some rate bounds need. Absent values fall back to run data
// where the bound's proof permits it: G to the largest recorded gradient
// norm, gamma_b to the largest realized step.
struct RateInputs {
  std::optional<double> L;
  std::optional<double> G;
  std::optional<double> gamma_b;
  std::optional<double> fstar;  // COR4 reference; defaults to the proxy
                                // min recorded full objective
};

// Closed-form min-progress bound of the chosen variant, evaluated from run
// data (realized stepsize sums, realized extremes). Throws
// HYPOTHESIS_VIOLATED when the variant's extra hypotheses fail.
BoundCheck check_min_progress(const TrajectoryRecord& record,
                              const Problem& problem,
                              const AssumptionParams& params, BoundName variant,
                              const RateInputs& extra = {},
                              const CheckTolerances& tol = {});

// ||x^K - x^K_p||^2 <= (1 - c1^2 mu / (4L))^K ||x^0 - x^0_p||^2
//                      + 8 c2 L gamma_max / (c1^2 mu).
BoundCheck check_linear_rate(const TrajectoryRecord& record,
                             const Problem& problem,
                             const AssumptionParams& params, double mu, double L,
                             const CheckTolerances& tol = {});

}  // namespace ud
