#include "ud/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "ud/error.hpp"
#include "ud/rng.hpp"

namespace ud {

namespace {

constexpr std::uint64_t kSamplingStream = 0x5D;  // SGD batch draws

struct PointEval {
  double f = 0.0;
  Vec grad;
  std::vector<std::uint32_t> ids;
};

std::size_t effective_stride(const RunOptions& opts, std::size_t dimension) {
  if (opts.record_stride > 0) return opts.record_stride;
  return dimension <= 100 ? 1 : 10;
}

void format_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

// The loop shared by run_gd and run_sgd; `evaluate` supplies the loss,
// gradient and sample ids driving step k.
std::pair<TrajectoryRecord, RunSummary> run_loop(
    const Problem& problem, const SolutionSet& set, const RunOptions& opts,
    const std::function<PointEval(std::size_t, const Vec&)>& evaluate) {
  if (opts.max_iters < 1) throw Error(ErrorCode::CONFIG, "max_iters must be >= 1");
  if (!(opts.alpha > 0.0) || !(opts.alpha < 2.0)) {
    throw Error(ErrorCode::CONFIG, "alpha must lie in (0, 2)");
  }
  require_dimension(opts.x0, problem.dimension, "run: x0 dimension");
  if (!all_finite(opts.x0)) throw Error(ErrorCode::CONFIG, "x0 must be finite");

  const std::size_t stride = effective_stride(opts, problem.dimension);
  const bool sample_progress = is_sample_kind(opts.progress.kind);
  const double floor_sq = opts.policy.grad_floor * opts.policy.grad_floor;

  TrajectoryRecord rec;
  rec.dimension = problem.dimension;
  rec.seed = opts.seed;
  rec.record_stride = stride;

  RunSummary sum;
  sum.status = Termination::MAX_ITERS;
  bool have_min = false;

  auto track_progress = [&](std::size_t k, double p) {
    if (!have_min || p < sum.min_progress) {
      sum.min_progress = p;
      sum.min_progress_k = k;
      have_min = true;
    }
  };

  Vec x = opts.x0;
  std::optional<double> prev_gamma;

  for (std::size_t k = 0; k < opts.max_iters; ++k) {
    const PointEval ev = evaluate(k, x);
    const double gnsq = norm_sq(ev.grad);
    const Projection proj = project(x, set);
    const double inner = dot(ev.grad, sub(x, proj.point));

    if (sample_progress) {
      track_progress(k, eval_batch_progress(opts.progress, problem, ev.ids, x, set));
    } else {
      track_progress(k, eval_progress(opts.progress, problem, x, set));
    }

    if (gnsq < floor_sq) {
      sum.status = Termination::CONVERGED_STATIONARY;
      break;
    }
    double gamma = 0.0;
    try {
      gamma = compute_step(opts.policy, StepContext{k, ev.f, gnsq, prev_gamma});
    } catch (const Error& e) {
      sum.status = e.code() == ErrorCode::DEGENERATE_GRADIENT
                       ? Termination::CONVERGED_STATIONARY
                       : Termination::POLICY_ERROR;
      break;
    }
    if (!(gamma > 0.0)) {
      // zero Polyak gap at a non-stationary point: value has converged
      sum.status = Termination::CONVERGED_STATIONARY;
      break;
    }

    if (opts.record_iterates && k % stride == 0) {
      rec.iterates.push_back(x);
      rec.iterate_ks.push_back(k);
    }
    rec.steps.push_back(StepRow{ev.f, gnsq, gamma, proj.dist_sq, inner, ev.ids});

    step_in_place(x, gamma, ev.grad);
    if (!all_finite(x)) {
      throw Error(ErrorCode::CONFIG, "iterate left the finite domain");
    }
    prev_gamma = gamma;
  }

  // Terminal state, always evaluated on the full objective.
  rec.final_x = x;
  rec.final_f = problem.value(x);
  const Vec g_final = problem.gradient(x);
  rec.final_grad_norm_sq = norm_sq(g_final);
  const Projection proj_final = project(x, set);
  rec.final_dist_sq = proj_final.dist_sq;
  rec.final_inner_prod = dot(g_final, sub(x, proj_final.point));
  if (opts.record_iterates) {
    if (rec.iterate_ks.empty() || rec.iterate_ks.back() != rec.steps.size()) {
      rec.iterates.push_back(x);
      rec.iterate_ks.push_back(rec.steps.size());
    }
  }
  if (!sample_progress) {
    track_progress(rec.steps.size(),
                   eval_progress(opts.progress, problem, x, set));
  }

  sum.final_x = x;
  sum.total_steps = rec.steps.size();
  if (!rec.steps.empty()) {
    sum.gamma_min = rec.steps[0].gamma;
    sum.gamma_max = rec.steps[0].gamma;
    for (const StepRow& row : rec.steps) {
      sum.gamma_min = std::min(sum.gamma_min, row.gamma);
      sum.gamma_max = std::max(sum.gamma_max, row.gamma);
    }
  }
  return {std::move(rec), sum};
}

}  // namespace

const char* to_string(BetaKind kind) noexcept {
  switch (kind) {
    case BetaKind::ZERO: return "zero";
    case BetaKind::CONST: return "const";
    case BetaKind::SAMPLE_GAP_AT_PROJ: return "sample_gap_at_proj";
  }
  return "?";
}

BetaKind beta_kind_from_string(const std::string& name) {
  for (BetaKind kind :
       {BetaKind::ZERO, BetaKind::CONST, BetaKind::SAMPLE_GAP_AT_PROJ}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::CONFIG, "unknown beta schedule: " + name);
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::MAX_ITERS: return "MAX_ITERS";
    case Termination::CONVERGED_STATIONARY: return "CONVERGED_STATIONARY";
    case Termination::POLICY_ERROR: return "POLICY_ERROR";
  }
  return "?";
}

bool TrajectoryRecord::has_all_iterates() const {
  return iterate_ks.size() == steps.size() + 1;
}

const Vec& TrajectoryRecord::iterate_at(std::size_t k) const {
  const auto it = std::lower_bound(iterate_ks.begin(), iterate_ks.end(), k);
  if (it == iterate_ks.end() || *it != k) {
    throw Error(ErrorCode::MISSING_ITERATES,
                "iterate " + std::to_string(k) + " was not recorded");
  }
  return iterates[static_cast<std::size_t>(it - iterate_ks.begin())];
}

double TrajectoryRecord::dist_sq_after(std::size_t k) const {
  if (k + 1 < steps.size()) return steps[k + 1].dist_sq;
  if (k + 1 == steps.size()) return final_dist_sq;
  throw Error(ErrorCode::CONFIG, "dist_sq_after: step index out of range");
}

std::pair<TrajectoryRecord, RunSummary> run_gd(const Problem& problem,
                                               const SolutionSet& set,
                                               const RunOptions& opts) {
  if (!problem.value || !problem.gradient) {
    throw Error(ErrorCode::CONFIG, "run_gd needs a deterministic objective");
  }
  return run_loop(problem, set, opts, [&](std::size_t, const Vec& x) {
    PointEval ev;
    ev.f = problem.value(x);
    ev.grad = problem.gradient(x);
    return ev;
  });
}

std::pair<TrajectoryRecord, RunSummary> run_sgd(const Problem& problem,
                                                const SolutionSet& set,
                                                const RunOptions& opts) {
  if (problem.sample_count == 0) {
    throw Error(ErrorCode::CONFIG, "run_sgd needs a sample-decomposed problem");
  }
  if (opts.batch_size < 1) throw Error(ErrorCode::CONFIG, "batch_size must be >= 1");

  const std::size_t n = problem.sample_count;
  auto rng = std::make_shared<CounterRng>(opts.seed, kSamplingStream);
  return run_loop(problem, set, opts, [&, rng](std::size_t, const Vec& x) {
    PointEval ev;
    if (opts.batch_size >= n) {
      // full batch, fixed order: degenerates to gradient descent
      ev.ids.resize(n);
      for (std::size_t i = 0; i < n; ++i) ev.ids[i] = static_cast<std::uint32_t>(i);
    } else {
      ev.ids.resize(opts.batch_size);
      for (std::size_t i = 0; i < opts.batch_size; ++i) {
        ev.ids[i] = static_cast<std::uint32_t>(rng->next_below(n));
      }
    }
    const BatchEval be = batch_eval(problem, ev.ids, x);
    ev.f = be.f;
    ev.grad = be.grad;
    return ev;
  });
}

std::vector<ReplayStep> replay_samples(const TrajectoryRecord& record,
                                       const Problem& problem,
                                       const SolutionSet& set) {
  std::vector<ReplayStep> out;
  out.reserve(record.steps.size());
  for (std::size_t k = 0; k < record.steps.size(); ++k) {
    const Vec& x = record.iterate_at(k);
    ReplayStep rs;
    if (record.steps[k].sample_ids.empty()) {
      rs.f = problem.value(x);
      rs.grad = problem.gradient(x);
    } else {
      const BatchEval be = batch_eval(problem, record.steps[k].sample_ids, x);
      rs.f = be.f;
      rs.grad = be.grad;
    }
    rs.grad_norm_sq = norm_sq(rs.grad);
    const Projection proj = project(x, set);
    rs.inner_prod = dot(rs.grad, sub(x, proj.point));
    rs.dist_sq = proj.dist_sq;
    out.push_back(std::move(rs));
  }
  return out;
}

void write_trajectory_csv(const TrajectoryRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IO, "cannot open " + path);
  out << "k,f,grad_norm_sq,gamma,dist_sq,inner_prod,sample_ids\n";
  std::string line;
  for (std::size_t k = 0; k < record.steps.size(); ++k) {
    const StepRow& row = record.steps[k];
    line.clear();
    line += std::to_string(k);
    line += ',';
    format_double(line, row.f);
    line += ',';
    format_double(line, row.grad_norm_sq);
    line += ',';
    format_double(line, row.gamma);
    line += ',';
    format_double(line, row.dist_sq);
    line += ',';
    format_double(line, row.inner_prod);
    line += ',';
    for (std::size_t i = 0; i < row.sample_ids.size(); ++i) {
      if (i > 0) line += ';';
      line += std::to_string(row.sample_ids[i]);
    }
    out << line << "\n";
  }
  // terminal state: no step was taken from it, so gamma and ids stay empty
  line.clear();
  line += std::to_string(record.steps.size());
  line += ',';
  format_double(line, record.final_f);
  line += ',';
  format_double(line, record.final_grad_norm_sq);
  line += ",,";
  format_double(line, record.final_dist_sq);
  line += ',';
  format_double(line, record.final_inner_prod);
  line += ',';
  out << line << "\n";
}

void write_iterates_csv(const TrajectoryRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IO, "cannot open " + path);
  out << "k";
  for (std::size_t j = 0; j < record.dimension; ++j) out << ",x_" << (j + 1);
  out << "\n";
  std::string line;
  for (std::size_t i = 0; i < record.iterates.size(); ++i) {
    line.clear();
    line += std::to_string(record.iterate_ks[i]);
    for (double v : record.iterates[i]) {
      line += ',';
      format_double(line, v);
    }
    out << line << "\n";
  }
}

TrajectoryRecord read_trajectory_csv(const std::string& trajectory_path,
                                     const std::string& iterates_path) {
  std::ifstream in(trajectory_path);
  if (!in) throw Error(ErrorCode::IO, "cannot open " + trajectory_path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IO, "empty trajectory csv");

  TrajectoryRecord rec;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 7) cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw Error(ErrorCode::IO, "trajectory csv has no rows");

  for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
    const auto& c = rows[r];
    StepRow row;
    row.f = std::stod(c[1]);
    row.grad_norm_sq = std::stod(c[2]);
    row.gamma = std::stod(c[3]);
    row.dist_sq = std::stod(c[4]);
    row.inner_prod = std::stod(c[5]);
    if (!c[6].empty()) {
      std::stringstream ids(c[6]);
      std::string id;
      while (std::getline(ids, id, ';')) {
        row.sample_ids.push_back(static_cast<std::uint32_t>(std::stoul(id)));
      }
    }
    rec.steps.push_back(std::move(row));
  }
  const auto& last = rows.back();
  if (!last[3].empty()) {
    throw Error(ErrorCode::IO, "trajectory csv is missing its terminal row");
  }
  rec.final_f = std::stod(last[1]);
  rec.final_grad_norm_sq = std::stod(last[2]);
  rec.final_dist_sq = std::stod(last[4]);
  rec.final_inner_prod = std::stod(last[5]);

  if (!iterates_path.empty()) {
    std::ifstream it_in(iterates_path);
    if (!it_in) throw Error(ErrorCode::IO, "cannot open " + iterates_path);
    if (!std::getline(it_in, line)) throw Error(ErrorCode::IO, "empty iterates csv");
    while (std::getline(it_in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::string cell;
      std::stringstream ss(line);
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      rec.iterate_ks.push_back(std::stoul(cells[0]));
      Vec x;
      for (std::size_t j = 1; j < cells.size(); ++j) x.push_back(std::stod(cells[j]));
      rec.dimension = x.size();
      rec.iterates.push_back(std::move(x));
    }
    if (!rec.iterates.empty()) rec.final_x = rec.iterates.back();
    if (rec.iterate_ks.size() >= 2) {
      rec.record_stride = rec.iterate_ks[1] - rec.iterate_ks[0];
    }
  }
  return rec;
}

}  // namespace ud
