#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ud/problem.hpp"
#include "ud/progress.hpp"
#include "ud/stepsize.hpp"

namespace ud {

enum class BetaKind { ZERO, CONST, SAMPLE_GAP_AT_PROJ };

struct BetaSchedule {
  BetaKind kind = BetaKind::ZERO;
  double value = 0.0;  // CONST
};

const char* to_string(BetaKind kind) noexcept;
BetaKind beta_kind_from_string(const std::string& name);

enum class Termination { MAX_ITERS, CONVERGED_STATIONARY, POLICY_ERROR };
const char* to_string(Termination t) noexcept;

struct RunOptions {
  StepsizePolicy policy;
  ProgressSpec progress;
  Vec x0;
  std::size_t max_iters = 100;
  std::size_t batch_size = 1;  // SGD only
  std::uint64_t seed = 0;
  bool record_iterates = true;
  std::size_t record_stride = 0;  // 0 = auto: 1 for d <= 100, else 10
  double alpha = 1.0;             // in (0, 2); enters the checks, not the update
  BetaSchedule beta;
};

// State before step k plus the action taken from it.
struct StepRow {
  double f = 0.0;             // f(x^k), or batch-mean f_xi for SGD
  double grad_norm_sq = 0.0;  // of the gradient used for the update
  double gamma = 0.0;
  double dist_sq = 0.0;              // ||x^k - x^k_p||^2
  double inner_prod = 0.0;           // <g, x^k - x^k_p>
  std::vector<std::uint32_t> sample_ids;  // empty for deterministic runs
};

struct TrajectoryRecord {
  std::vector<StepRow> steps;
  // Iterates stored at record_stride (x^0 always, final always). iterate_ks
  // holds the step index of each stored iterate.
  std::vector<Vec> iterates;
  std::vector<std::size_t> iterate_ks;
  Vec final_x;
  double final_f = 0.0;
  double final_grad_norm_sq = 0.0;
  double final_dist_sq = 0.0;
  double final_inner_prod = 0.0;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  std::size_t record_stride = 1;

  bool has_all_iterates() const;
  // x^k for k in [0, steps.size()]; throws MISSING_ITERATES if thinned out.
  const Vec& iterate_at(std::size_t k) const;
  // dist_sq of the state after step k (row k+1 or the terminal state).
  double dist_sq_after(std::size_t k) const;
};

struct RunSummary {
  Vec final_x;
  double min_progress = 0.0;
  std::size_t min_progress_k = 0;
  std::size_t total_steps = 0;
  Termination status = Termination::MAX_ITERS;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
};

// Plain gradient descent x <- x - gamma * grad f(x). The problem must expose
// a deterministic value/gradient (sample-backed problems aggregate).
std::pair<TrajectoryRecord, RunSummary> run_gd(const Problem& problem,
                                               const SolutionSet& set,
                                               const RunOptions& opts);

// Mini-batch SGD with uniform-with-replacement sampling from the seeded
// counter generator. A batch of size sample_count short-circuits to the full
// id range in order, which reproduces run_gd bitwise. Stochastic Polyak rules
// see the batch-mean loss and batch-mean gradient.
std::pair<TrajectoryRecord, RunSummary> run_sgd(const Problem& problem,
                                                const SolutionSet& set,
                                                const RunOptions& opts);

struct ReplayStep {
  double f = 0.0;  // full objective for deterministic rows, batch mean otherwise
  Vec grad;
  double grad_norm_sq = 0.0;
  double inner_prod = 0.0;
  double dist_sq = 0.0;
};

// Re-evaluates every recorded step against an arbitrary solution set
// (typically the PROXY {x^K}). Bit-identical to the recorded fields when the
// original set is supplied.
std::vector<ReplayStep> replay_samples(const TrajectoryRecord& record,
                                       const Problem& problem,
                                       const SolutionSet& set);

// trajectory.csv: k,f,grad_norm_sq,gamma,dist_sq,inner_prod,sample_ids with a
// terminal row whose gamma and sample_ids are empty. iterates.csv: k,x_1..x_d.
// All doubles print with 17 significant digits so the importer round-trips
// bit-exactly.
void write_trajectory_csv(const TrajectoryRecord& record, const std::string& path);
void write_iterates_csv(const TrajectoryRecord& record, const std::string& path);
TrajectoryRecord read_trajectory_csv(const std::string& trajectory_path,
                                     const std::string& iterates_path = "");

}  // namespace ud
