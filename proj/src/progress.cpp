#include "ud/progress.hpp"

#include <cmath>

#include "ud/error.hpp"

namespace ud {

namespace {

constexpr double kClampTol = 1e-12;

double require_constant(const std::optional<double>& v, const char* what) {
  if (!v) throw Error(ErrorCode::CONFIG, std::string("progress spec missing ") + what);
  return *v;
}

double clamp_nonnegative(double v) {
  if (v >= 0.0) return v;
  if (v >= -kClampTol) return 0.0;
  throw Error(ErrorCode::NEGATIVE_GAP,
              "progress value " + std::to_string(v) + " below -1e-12; wrong fstar?");
}

}  // namespace

const char* to_string(ProgressKind kind) noexcept {
  switch (kind) {
    case ProgressKind::GAP: return "gap";
    case ProgressKind::STRONG_GAP: return "strong_gap";
    case ProgressKind::GRAD_NORM_OVER_L: return "grad_norm_over_L";
    case ProgressKind::GAP_PLUS_GRAD: return "gap_plus_grad";
    case ProgressKind::AIMING_VALUE: return "aiming_value";
    case ProgressKind::SAMPLE_GAP: return "sample_gap";
    case ProgressKind::SAMPLE_GRAD_NORM: return "sample_grad_norm";
  }
  return "?";
}

ProgressKind progress_kind_from_string(const std::string& name) {
  for (ProgressKind kind :
       {ProgressKind::GAP, ProgressKind::STRONG_GAP, ProgressKind::GRAD_NORM_OVER_L,
        ProgressKind::GAP_PLUS_GRAD, ProgressKind::AIMING_VALUE,
        ProgressKind::SAMPLE_GAP, ProgressKind::SAMPLE_GRAD_NORM}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::CONFIG, "unknown progress kind: " + name);
}

bool is_sample_kind(ProgressKind kind) noexcept {
  return kind == ProgressKind::SAMPLE_GAP || kind == ProgressKind::SAMPLE_GRAD_NORM;
}

double eval_progress(const ProgressSpec& spec, const Problem& problem,
                     const Vec& x, const SolutionSet& set) {
  switch (spec.kind) {
    case ProgressKind::GAP:
      return clamp_nonnegative(problem.value(x) - require_constant(spec.fstar, "fstar"));
    case ProgressKind::STRONG_GAP: {
      const double gap = problem.value(x) - require_constant(spec.fstar, "fstar");
      const double mu = require_constant(spec.mu, "mu");
      return clamp_nonnegative(gap + 0.5 * mu * distance_sq(x, set));
    }
    case ProgressKind::GRAD_NORM_OVER_L:
      return norm_sq(problem.gradient(x)) / require_constant(spec.L, "L");
    case ProgressKind::GAP_PLUS_GRAD: {
      const double gap = problem.value(x) - require_constant(spec.fstar, "fstar");
      const double L = require_constant(spec.L, "L");
      return clamp_nonnegative(gap + norm_sq(problem.gradient(x)) / (2.0 * L));
    }
    case ProgressKind::AIMING_VALUE:
      return clamp_nonnegative(problem.value(x));
    case ProgressKind::SAMPLE_GAP:
    case ProgressKind::SAMPLE_GRAD_NORM:
      throw Error(ErrorCode::CONFIG, "sample progress kinds need a sample id");
  }
  throw Error(ErrorCode::CONFIG, "bad progress kind");
}

double eval_sample_progress(const ProgressSpec& spec, const Problem& problem,
                            std::size_t sample_id, const Vec& x,
                            const SolutionSet& set) {
  const std::uint32_t id = static_cast<std::uint32_t>(sample_id);
  return eval_batch_progress(spec, problem, std::span<const std::uint32_t>(&id, 1),
                             x, set);
}

double eval_batch_progress(const ProgressSpec& spec, const Problem& problem,
                           std::span<const std::uint32_t> ids, const Vec& x,
                           const SolutionSet& set) {
  if (problem.sample_count == 0) {
    throw Error(ErrorCode::CONFIG, "problem has no sample decomposition");
  }
  switch (spec.kind) {
    case ProgressKind::SAMPLE_GAP: {
      const Projection proj = project(x, set);
      const double fx = batch_eval(problem, ids, x).f;
      const double fp = batch_eval(problem, ids, proj.point).f;
      return fx - fp;  // negative values are reported, not clamped
    }
    case ProgressKind::SAMPLE_GRAD_NORM: {
      const double nsq = norm_sq(batch_eval(problem, ids, x).grad);
      if (spec.raw_grad_norm) return nsq;
      return nsq / require_constant(spec.L, "L");
    }
    default:
      throw Error(ErrorCode::CONFIG, "not a sample progress kind");
  }
}

}  // namespace ud
