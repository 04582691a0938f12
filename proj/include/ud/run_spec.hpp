#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ud/halfspace.hpp"
#include "ud/optimizer.hpp"
#include "ud/problem.hpp"
#include "ud/progress.hpp"
#include "ud/stepsize.hpp"

namespace ud {

using Json = nlohmann::json;

// Problem description as it appears in run-config JSON.
struct ProblemSpec {
  std::string kind;  // "zoo" | "quadratic" | "halfspace"
  // zoo
  std::string tag = "f1";
  // quadratic
  std::size_t dimension = 1;
  double mu = 1.0;
  double L = 1.0;
  Vec center;
  // halfspace
  std::uint64_t data_seed = 11;
  std::size_t n = 40;
  std::size_t d = 4;
  double mean_separation = 4.0;
  double variance = 2.0;
  double reg_lambda = 1e-5;

  Problem build() const;
  HalfSpaceDataset build_dataset() const;  // halfspace only
};

// Solution-set selection: the problem's known minimizers, explicit points,
// or the end-of-run proxy (resolved only at certification time).
struct SetSpec {
  std::string kind = "known";  // "known" | "points" | "proxy"
  std::vector<Vec> points;

  SolutionSet resolve(const Problem& problem) const;  // known/points only
};

struct RunSpec {
  ProblemSpec problem;
  SetSpec set;
  StepsizePolicy policy;
  ProgressSpec progress;
  Vec x0;
  std::size_t max_iters = 100;
  std::size_t batch_size = 0;  // 0 = deterministic gradient descent
  std::uint64_t seed = 0;
  bool record_iterates = true;
  std::size_t record_stride = 0;
  double alpha = 1.0;
  BetaSchedule beta;

  bool stochastic() const { return batch_size > 0; }
  RunOptions options() const;
};

Json to_json(const ProgressSpec& spec);
ProgressSpec progress_from_json(const Json& j);
Json to_json(const StepsizePolicy& policy);
StepsizePolicy policy_from_json(const Json& j);
Json to_json(const BetaSchedule& beta);
BetaSchedule beta_from_json(const Json& j);
Json to_json(const SetSpec& set);
SetSpec set_spec_from_json(const Json& j);
Json to_json(const ProblemSpec& spec);
ProblemSpec problem_spec_from_json(const Json& j);
Json to_json(const RunSpec& spec);
RunSpec run_spec_from_json(const Json& j);

// Applies a dotted-key assignment like "policy.c1=0.5" onto a config object.
// The value text is parsed as JSON when possible and kept as a string
// otherwise.
void apply_override(Json& config, const std::string& assignment);

Json load_json_file(const std::string& path);     // throws CONFIG
void write_json_file(const Json& j, const std::string& path);

}  // namespace ud
