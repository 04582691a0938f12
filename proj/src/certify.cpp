#include "ud/certify.hpp"

#include <algorithm>
#include <cmath>

#include "ud/error.hpp"
#include "ud/stepsize.hpp"

namespace ud {

namespace {

// State snapshot at step k under the certification set (which may differ
// from the set the run used).
struct StepView {
  double f = 0.0;  // batch mean for stochastic rows, full objective otherwise
  double grad_norm_sq = 0.0;
  double gamma = 0.0;
  double dist_sq = 0.0;
  double inner_prod = 0.0;
  double progress = 0.0;
  double beta = 0.0;
  bool stochastic = false;
  bool negative_progress = false;
};

double beta_for_step(const AssumptionParams& params, const Problem& problem,
                     std::span<const std::uint32_t> ids, const Vec& x_p) {
  switch (params.beta.kind) {
    case BetaKind::ZERO:
      return 0.0;
    case BetaKind::CONST:
      return params.beta.value;
    case BetaKind::SAMPLE_GAP_AT_PROJ: {
      if (!ids.empty()) {
        const double fp = batch_eval(problem, ids, x_p).f;
        return params.c1 * (fp - batch_lower_bound(problem, ids));
      }
      // deterministic fallback: full objective against the mean lower bound
      double lb = 0.0;
      if (!problem.known_sample_lower_bounds.empty()) {
        for (double v : problem.known_sample_lower_bounds) lb += v;
        lb /= static_cast<double>(problem.known_sample_lower_bounds.size());
      }
      return params.c1 * (problem.value(x_p) - lb);
    }
  }
  return 0.0;
}

std::vector<StepView> build_views(const TrajectoryRecord& record,
                                  const Problem& problem,
                                  const AssumptionParams& params) {
  const bool sample_kind = is_sample_kind(params.progress.kind);
  std::vector<StepView> views;
  views.reserve(record.steps.size() + 1);

  for (std::size_t k = 0; k < record.steps.size(); ++k) {
    const StepRow& row = record.steps[k];
    const Vec& x = record.iterate_at(k);
    const Projection proj = project(x, params.set);

    StepView v;
    v.gamma = row.gamma;
    v.dist_sq = proj.dist_sq;
    v.stochastic = !row.sample_ids.empty();
    if (v.stochastic) {
      const BatchEval be = batch_eval(problem, row.sample_ids, x);
      v.f = be.f;
      v.grad_norm_sq = norm_sq(be.grad);
      v.inner_prod = dot(be.grad, sub(x, proj.point));
    } else {
      v.f = problem.value(x);
      const Vec g = problem.gradient(x);
      v.grad_norm_sq = norm_sq(g);
      v.inner_prod = dot(g, sub(x, proj.point));
    }
    if (sample_kind) {
      if (!v.stochastic) {
        throw Error(ErrorCode::CONFIG,
                    "sample progress kind over a deterministic trajectory");
      }
      v.progress =
          eval_batch_progress(params.progress, problem, row.sample_ids, x, params.set);
      v.negative_progress = v.progress < 0.0;
    } else {
      v.progress = eval_progress(params.progress, problem, x, params.set);
    }
    v.beta = beta_for_step(params, problem, row.sample_ids, proj.point);
    views.push_back(std::move(v));
  }
  return views;
}

// Terminal-state view for deterministic progress kinds (no batch exists
// there, so sample kinds stop at the last step).
std::optional<StepView> terminal_view(const TrajectoryRecord& record,
                                      const Problem& problem,
                                      const AssumptionParams& params) {
  if (is_sample_kind(params.progress.kind)) return std::nullopt;
  const Vec& x = record.final_x.empty()
                     ? record.iterate_at(record.steps.size())
                     : record.final_x;
  const Projection proj = project(x, params.set);
  StepView v;
  v.f = problem.value(x);
  const Vec g = problem.gradient(x);
  v.grad_norm_sq = norm_sq(g);
  v.inner_prod = dot(g, sub(x, proj.point));
  v.dist_sq = proj.dist_sq;
  v.progress = eval_progress(params.progress, problem, x, params.set);
  return v;
}

bool leq_with_tol(double lhs, double rhs, const CheckTolerances& tol) {
  return lhs <= rhs + tol.rel * std::abs(rhs) + tol.abs;
}

BoundCheck make_check(BoundName name, double lhs, double rhs,
                      const CheckTolerances& tol) {
  BoundCheck c;
  c.name = name;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.pass = leq_with_tol(lhs, rhs, tol);
  return c;
}

double min_progress_over(const std::vector<StepView>& views,
                         const std::optional<StepView>& terminal,
                         double scale = 1.0) {
  double m = views[0].progress * scale;
  for (const StepView& v : views) m = std::min(m, v.progress * scale);
  if (terminal) m = std::min(m, terminal->progress * scale);
  return m;
}

void require_steps(const std::vector<StepView>& views, BoundName name) {
  if (views.empty()) {
    throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                std::string(to_string(name)) + " needs at least one step");
  }
}

void require_monotone_gamma(const std::vector<StepView>& views, BoundName name) {
  for (std::size_t k = 1; k < views.size(); ++k) {
    if (views[k].gamma > views[k - 1].gamma * (1.0 + 1e-12)) {
      throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                  std::string(to_string(name)) +
                      " needs nonincreasing stepsizes; violated at k=" +
                      std::to_string(k));
    }
  }
}

}  // namespace

const char* to_string(BoundName name) noexcept {
  switch (name) {
    case BoundName::THM1_DESCENT: return "THM1_DESCENT";
    case BoundName::THM1_MIN_P: return "THM1_MIN_P";
    case BoundName::COR1: return "COR1";
    case BoundName::COR2: return "COR2";
    case BoundName::COR3: return "COR3";
    case BoundName::THM2_DESCENT: return "THM2_DESCENT";
    case BoundName::THM2_MIN_P: return "THM2_MIN_P";
    case BoundName::COR4: return "COR4";
    case BoundName::COR5: return "COR5";
    case BoundName::EX2_LINEAR: return "EX2_LINEAR";
  }
  return "?";
}

double residual_at(const Problem& problem, const Vec& x,
                   const AssumptionParams& params,
                   std::optional<std::size_t> sample_id) {
  const Projection proj = project(x, params.set);
  double progress = 0.0;
  double inner = 0.0;
  if (sample_id) {
    progress = eval_sample_progress(params.progress, problem, *sample_id, x,
                                    params.set);
    const Vec g = problem.sample_gradient(*sample_id, x);
    inner = dot(g, sub(x, proj.point));
  } else {
    progress = eval_progress(params.progress, problem, x, params.set);
    inner = dot(problem.gradient(x), sub(x, proj.point));
  }
  return params.c1 * progress - inner;
}

ResidualReport trajectory_constants(const TrajectoryRecord& record,
                                    const Problem& problem,
                                    const AssumptionParams& params) {
  const std::vector<StepView> views = build_views(record, problem, params);
  const std::optional<StepView> terminal = terminal_view(record, problem, params);

  ResidualReport rep;
  auto accumulate = [&rep, &params](const StepView& v) {
    const double r = params.c1 * v.progress - v.inner_prod;
    rep.residuals.push_back(r);
    if (v.negative_progress) ++rep.negative_progress_count;
  };
  for (const StepView& v : views) accumulate(v);
  if (terminal) accumulate(*terminal);

  if (rep.residuals.empty()) {
    throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                "trajectory_constants: no probe points");
  }
  rep.points = rep.residuals.size();
  rep.max_residual = rep.residuals[0];
  double sum = 0.0;
  double sum_clamped = 0.0;
  for (double r : rep.residuals) {
    rep.max_residual = std::max(rep.max_residual, r);
    sum += r;
    sum_clamped += std::max(0.0, r);
  }
  rep.mean_residual = sum / static_cast<double>(rep.points);
  rep.mean_c2 = sum_clamped / static_cast<double>(rep.points);
  rep.empirical_c2 = std::max(0.0, rep.max_residual);
  return rep;
}

double global_c2_1d(const Problem& problem, const AssumptionParams& params,
                    double lo, double hi, double tol, std::size_t grid_points) {
  if (problem.dimension != 1) {
    throw Error(ErrorCode::CONFIG, "global_c2_1d needs a 1-D problem");
  }
  if (!(lo < hi) || grid_points < 3) {
    throw Error(ErrorCode::CONFIG, "global_c2_1d needs lo < hi and a real grid");
  }
  auto r = [&](double t) { return residual_at(problem, Vec{t}, params); };

  const double width = hi - lo;
  std::size_t best = 0;
  double best_r = r(lo);
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double t = lo + width * static_cast<double>(i) /
                              static_cast<double>(grid_points - 1);
    const double ri = r(t);
    if (ri > best_r) {
      best_r = ri;
      best = i;
    }
  }
  const double x_best = lo + width * static_cast<double>(best) /
                                 static_cast<double>(grid_points - 1);
  if (best == 0 || best + 1 == grid_points || x_best - lo <= tol ||
      hi - x_best <= tol) {
    throw Error(ErrorCode::BOUNDARY_MAX,
                "residual maximum at the interval boundary (x = " +
                    std::to_string(x_best) + "); widen the interval");
  }

  // Golden-section maximization on the bracketing grid cells.
  const double cell = width / static_cast<double>(grid_points - 1);
  double a = x_best - cell;
  double b = x_best + cell;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double rc = r(c);
  double rd = r(d);
  while (b - a > tol * 0.25) {
    if (rc > rd) {
      b = d;
      d = c;
      rd = rc;
      c = b - phi * (b - a);
      rc = r(c);
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + phi * (b - a);
      rd = r(d);
    }
  }
  const double refined = std::max({best_r, rc, rd, r(0.5 * (a + b))});
  return std::max(0.0, refined);
}

BoundCheck check_descent_step(const DescentStepData& data,
                              const AssumptionParams& params,
                              const CheckTolerances& tol) {
  const double gamma_max = max_admissible_step(
      data.inner_prod, data.grad_norm_sq, params.alpha, data.beta, params.c2);
  const BoundName name =
      data.stochastic ? BoundName::THM2_DESCENT : BoundName::THM1_DESCENT;
  if (!leq_with_tol(data.gamma, gamma_max, tol)) {
    BoundCheck c;
    c.name = name;
    c.k = data.k;
    c.skipped = true;
    c.note = "INADMISSIBLE_STEP: gamma " + std::to_string(data.gamma) +
             " exceeds admissible " + std::to_string(gamma_max);
    return c;
  }
  const double rhs = data.dist_sq_before -
                     params.alpha * params.c1 * data.gamma * data.progress +
                     (2.0 - params.alpha) * data.beta * data.gamma +
                     2.0 * params.c2 * data.gamma;
  BoundCheck c = make_check(name, data.dist_sq_after, rhs, tol);
  c.k = data.k;
  return c;
}

std::vector<BoundCheck> check_descent_trajectory(const TrajectoryRecord& record,
                                                 const Problem& problem,
                                                 const AssumptionParams& params,
                                                 const CheckTolerances& tol) {
  const std::vector<StepView> views = build_views(record, problem, params);
  const std::optional<StepView> terminal = terminal_view(record, problem, params);

  std::vector<BoundCheck> checks;
  checks.reserve(views.size());
  for (std::size_t k = 0; k < views.size(); ++k) {
    DescentStepData data;
    data.k = k;
    data.dist_sq_before = views[k].dist_sq;
    data.dist_sq_after = k + 1 < views.size()
                             ? views[k + 1].dist_sq
                             : (terminal ? terminal->dist_sq
                                         : distance_sq(record.final_x, params.set));
    data.gamma = views[k].gamma;
    data.grad_norm_sq = views[k].grad_norm_sq;
    data.inner_prod = views[k].inner_prod;
    data.progress = views[k].progress;
    data.beta = views[k].beta;
    data.stochastic = views[k].stochastic;
    checks.push_back(check_descent_step(data, params, tol));
  }
  return checks;
}

BoundCheck check_min_progress(const TrajectoryRecord& record,
                              const Problem& problem,
                              const AssumptionParams& params, BoundName variant,
                              const RateInputs& extra,
                              const CheckTolerances& tol) {
  const std::vector<StepView> views = build_views(record, problem, params);
  const std::optional<StepView> terminal = terminal_view(record, problem, params);
  require_steps(views, variant);

  const double T = static_cast<double>(views.size());
  const double d0_sq = views[0].dist_sq;
  const double a = params.alpha;
  const double c1 = params.c1;
  const double c2 = params.c2;

  double sum_gamma = 0.0;
  double sum_gamma_beta = 0.0;
  double sum_beta = 0.0;
  double gamma_min = views[0].gamma;
  double gamma_max = views[0].gamma;
  double d_max_sq = terminal ? terminal->dist_sq : 0.0;
  double gnsq_max = terminal ? terminal->grad_norm_sq : 0.0;
  for (const StepView& v : views) {
    sum_gamma += v.gamma;
    sum_gamma_beta += v.gamma * v.beta;
    sum_beta += v.beta;
    gamma_min = std::min(gamma_min, v.gamma);
    gamma_max = std::max(gamma_max, v.gamma);
    d_max_sq = std::max(d_max_sq, v.dist_sq);
    gnsq_max = std::max(gnsq_max, v.grad_norm_sq);
  }
  const double gamma_last = views.back().gamma;
  const bool stochastic_variant =
      variant == BoundName::THM2_MIN_P || variant == BoundName::COR4 ||
      variant == BoundName::COR5;
  if (stochastic_variant && !is_sample_kind(params.progress.kind) &&
      variant != BoundName::COR4) {
    throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                std::string(to_string(variant)) + " needs a sample progress kind");
  }

  switch (variant) {
    case BoundName::THM1_MIN_P: {
      const double ck =
          (2.0 - a) * sum_gamma_beta / (a * c1 * sum_gamma) + 2.0 * c2 / (a * c1);
      const double rhs = d0_sq / (a * c1 * sum_gamma) + ck;
      return make_check(variant, min_progress_over(views, terminal), rhs, tol);
    }
    case BoundName::COR1: {
      if (!extra.L) {
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED, "COR1 needs a smoothness L");
      }
      if (params.progress.kind != ProgressKind::GAP || params.alpha != 1.0 ||
          params.beta.kind != BetaKind::ZERO) {
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                    "COR1 is stated for the value gap at alpha=1, beta=0");
      }
      // After T steps the bound with K = T holds because the Polyak step from
      // the terminal state is itself admissible; the min then runs over the
      // T + 1 recorded states.
      const double states = T + (terminal ? 1.0 : 0.0);
      const double rhs =
          2.0 * *extra.L * d0_sq / (c1 * c1 * states) + 2.0 * c2 / c1;
      return make_check(variant, min_progress_over(views, terminal), rhs, tol);
    }
    case BoundName::COR2: {
      const double g_bound = extra.G ? *extra.G : std::sqrt(gnsq_max);
      const double states = T + (terminal ? 1.0 : 0.0);
      const double ck =
          (2.0 - a) * sum_gamma_beta / (a * c1 * sum_gamma) + 2.0 * c2 / (a * c1);
      const double rhs = g_bound * std::sqrt(d0_sq) /
                             (std::sqrt((2.0 - a) * a) * c1 * std::sqrt(states)) +
                         ck;
      return make_check(variant, min_progress_over(views, terminal), rhs, tol);
    }
    case BoundName::COR3: {
      require_monotone_gamma(views, variant);
      const double rhs = d_max_sq / (a * c1 * gamma_last * T) +
                         (2.0 - a) * sum_beta / (a * c1 * T) +
                         2.0 * c2 / (a * c1);
      return make_check(variant, min_progress_over(views, terminal), rhs, tol);
    }
    case BoundName::THM2_MIN_P: {
      const double gamma_b = extra.gamma_b ? *extra.gamma_b : gamma_max;
      // gamma_min realized = min_k min{gamma~^k, gamma_b} = min{gamma*, gamma_b}
      const double rhs = d0_sq / (a * gamma_min * T) +
                         (2.0 - a) * gamma_b * sum_beta / (a * gamma_min * T) +
                         2.0 * gamma_b * c2 / (a * gamma_min);
      return make_check(variant, min_progress_over(views, terminal, c1), rhs, tol);
    }
    case BoundName::COR4: {
      if (!extra.L) {
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED, "COR4 needs a smoothness L");
      }
      if (params.progress.kind != ProgressKind::SAMPLE_GAP ||
          params.alpha != 1.0 ||
          params.beta.kind != BetaKind::SAMPLE_GAP_AT_PROJ) {
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                    "COR4 is stated for the per-sample gap at alpha=1 with the "
                    "projection-gap beta");
      }
      if (params.set.points.size() != 1) {
        throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                    "COR4 needs a singleton solution set");
      }
      const double gamma_b = extra.gamma_b ? *extra.gamma_b : gamma_max;
      const double gmin = std::min(c1 / (2.0 * *extra.L), gamma_b);
      // sigma^2 = mean over samples of f_xi(x_p) - (its lower bound)
      const Vec& xp = params.set.points[0];
      std::vector<std::uint32_t> all(problem.sample_count);
      for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = static_cast<std::uint32_t>(i);
      }
      const double sigma_sq =
          batch_eval(problem, all, xp).f - batch_lower_bound(problem, all);

      double fstar = 0.0;
      if (extra.fstar) {
        fstar = *extra.fstar;
      } else if (problem.known_fstar) {
        fstar = *problem.known_fstar;
      } else {
        // proxy reference: min recorded full objective
        fstar = problem.value(record.iterate_at(0));
        for (std::size_t k = 1; k <= record.steps.size(); ++k) {
          fstar = std::min(fstar, problem.value(record.iterate_at(k)));
        }
      }
      double lhs = problem.value(record.iterate_at(0)) - fstar;
      for (std::size_t k = 1; k <= record.steps.size(); ++k) {
        lhs = std::min(lhs, problem.value(record.iterate_at(k)) - fstar);
      }
      const double rhs = d0_sq / (c1 * gmin * T) + sigma_sq * gamma_b / gmin +
                         2.0 * gamma_b * c2 / (c1 * gmin);
      return make_check(variant, lhs, rhs, tol);
    }
    case BoundName::COR5: {
      require_monotone_gamma(views, variant);
      const double rhs = d_max_sq / (a * gamma_last * T) +
                         (2.0 - a) * sum_beta / (a * T) + 2.0 * c2 / a;
      return make_check(variant, min_progress_over(views, terminal, c1), rhs, tol);
    }
    default:
      throw Error(ErrorCode::CONFIG, "not a min-progress bound variant");
  }
}

BoundCheck check_linear_rate(const TrajectoryRecord& record,
                             const Problem& problem,
                             const AssumptionParams& params, double mu, double L,
                             const CheckTolerances& tol) {
  const std::vector<StepView> views = build_views(record, problem, params);
  require_steps(views, BoundName::EX2_LINEAR);
  if (!(mu > 0.0) || !(L > 0.0) || params.c1 * params.c1 * mu > 4.0 * L) {
    throw Error(ErrorCode::HYPOTHESIS_VIOLATED,
                "linear rate needs 0 < mu, 0 < L, c1^2 mu <= 4L");
  }
  double gamma_max = 0.0;
  for (const StepView& v : views) gamma_max = std::max(gamma_max, v.gamma);
  const double factor = 1.0 - params.c1 * params.c1 * mu / (4.0 * L);
  const double neighborhood =
      params.c2 == 0.0
          ? 0.0
          : 8.0 * params.c2 * L * gamma_max / (params.c1 * params.c1 * mu);
  const double rhs =
      std::pow(factor, static_cast<double>(views.size())) * views[0].dist_sq +
      neighborhood;
  const double lhs = distance_sq(record.final_x, params.set);
  BoundCheck c = make_check(BoundName::EX2_LINEAR, lhs, rhs, tol);
  c.note = "rate factor " + std::to_string(factor);
  return c;
}

}  // namespace ud
