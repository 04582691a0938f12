#include "ud/run_spec.hpp"

#include <fstream>

#include "ud/error.hpp"
#include "ud/quadratic.hpp"
#include "ud/zoo.hpp"

namespace ud {

namespace {

double get_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number()) {
    throw Error(ErrorCode::CONFIG, std::string(key) + " must be a number");
  }
  return j.at(key).get<double>();
}

std::optional<double> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Vec get_vec(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::CONFIG, std::string(key) + " missing");
  Vec out;
  for (const Json& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

}  // namespace

Problem ProblemSpec::build() const {
  if (kind == "zoo") return make_zoo_problem(zoo_tag_from_string(tag));
  if (kind == "quadratic") {
    Vec c = center;
    if (c.empty()) c.assign(dimension, 0.0);
    return make_quadratic_problem(dimension, mu, L, c);
  }
  if (kind == "halfspace") return make_halfspace_problem(build_dataset());
  throw Error(ErrorCode::CONFIG, "unknown problem kind: " + kind);
}

HalfSpaceDataset ProblemSpec::build_dataset() const {
  if (kind != "halfspace") {
    throw Error(ErrorCode::CONFIG, "only halfspace problems carry a dataset");
  }
  return generate_halfspace_dataset(data_seed, n, d, mean_separation, variance,
                                    reg_lambda);
}

SolutionSet SetSpec::resolve(const Problem& problem) const {
  if (kind == "known") {
    if (!problem.known_minimizers) {
      throw Error(ErrorCode::CONFIG,
                  "problem has no known minimizers; give explicit points");
    }
    return *problem.known_minimizers;
  }
  if (kind == "points") {
    if (points.empty()) throw Error(ErrorCode::CONFIG, "set.points is empty");
    SolutionSet set;
    set.points = points;
    set.kind = points.size() == 1 ? SetKind::SINGLETON : SetKind::FINITE;
    return set;
  }
  if (kind == "proxy") {
    throw Error(ErrorCode::CONFIG,
                "proxy sets resolve against a finished run, not a problem");
  }
  throw Error(ErrorCode::CONFIG, "unknown set kind: " + kind);
}

RunOptions RunSpec::options() const {
  RunOptions opts;
  opts.policy = policy;
  opts.progress = progress;
  opts.x0 = x0;
  opts.max_iters = max_iters;
  opts.batch_size = batch_size == 0 ? 1 : batch_size;
  opts.seed = seed;
  opts.record_iterates = record_iterates;
  opts.record_stride = record_stride;
  opts.alpha = alpha;
  opts.beta = beta;
  return opts;
}

Json to_json(const ProgressSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["fstar"] = spec.fstar ? Json(*spec.fstar) : Json(nullptr);
  j["mu"] = spec.mu ? Json(*spec.mu) : Json(nullptr);
  j["L"] = spec.L ? Json(*spec.L) : Json(nullptr);
  j["raw_grad_norm"] = spec.raw_grad_norm;
  return j;
}

ProgressSpec progress_from_json(const Json& j) {
  ProgressSpec spec;
  spec.kind = progress_kind_from_string(j.at("kind").get<std::string>());
  spec.fstar = get_optional(j, "fstar");
  spec.mu = get_optional(j, "mu");
  spec.L = get_optional(j, "L");
  spec.raw_grad_norm = j.value("raw_grad_norm", false);
  return spec;
}

Json to_json(const StepsizePolicy& policy) {
  Json j;
  j["kind"] = to_string(policy.kind);
  j["gamma"] = policy.gamma;
  j["c1"] = policy.c1;
  j["fstar"] = policy.fstar;
  j["lstar"] = policy.lstar;
  j["gamma0"] = policy.gamma0 ? Json(*policy.gamma0) : Json(nullptr);
  j["cap"] = policy.cap ? Json(*policy.cap) : Json(nullptr);
  j["grad_floor"] = policy.grad_floor;
  return j;
}

StepsizePolicy policy_from_json(const Json& j) {
  StepsizePolicy policy;
  policy.kind = policy_kind_from_string(j.at("kind").get<std::string>());
  policy.gamma = get_number(j, "gamma", 0.0);
  policy.c1 = get_number(j, "c1", 1.0);
  policy.fstar = get_number(j, "fstar", 0.0);
  policy.lstar = get_number(j, "lstar", 0.0);
  policy.gamma0 = get_optional(j, "gamma0");
  policy.cap = get_optional(j, "cap");
  policy.grad_floor = get_number(j, "grad_floor", 1e-12);
  if (policy.kind == PolicyKind::CONSTANT && !(policy.gamma > 0.0)) {
    throw Error(ErrorCode::CONFIG, "constant policy needs gamma > 0");
  }
  if (policy.cap && !(*policy.cap > 0.0)) {
    throw Error(ErrorCode::CONFIG, "cap must be positive");
  }
  return policy;
}

Json to_json(const BetaSchedule& beta) {
  Json j;
  j["kind"] = to_string(beta.kind);
  j["value"] = beta.value;
  return j;
}

BetaSchedule beta_from_json(const Json& j) {
  BetaSchedule beta;
  beta.kind = beta_kind_from_string(j.at("kind").get<std::string>());
  beta.value = get_number(j, "value", 0.0);
  if (beta.kind == BetaKind::CONST && beta.value < 0.0) {
    throw Error(ErrorCode::CONFIG, "const beta must be >= 0");
  }
  return beta;
}

Json to_json(const SetSpec& set) {
  Json j;
  j["kind"] = set.kind;
  if (!set.points.empty()) {
    Json pts = Json::array();
    for (const Vec& p : set.points) pts.push_back(p);
    j["points"] = pts;
  }
  return j;
}

SetSpec set_spec_from_json(const Json& j) {
  SetSpec set;
  set.kind = j.value("kind", std::string("known"));
  if (j.contains("points")) {
    for (const Json& p : j.at("points")) {
      Vec v;
      for (const Json& x : p) v.push_back(x.get<double>());
      set.points.push_back(std::move(v));
    }
  }
  if (set.kind != "known" && set.kind != "points" && set.kind != "proxy") {
    throw Error(ErrorCode::CONFIG, "unknown set kind: " + set.kind);
  }
  return set;
}

Json to_json(const ProblemSpec& spec) {
  Json j;
  j["kind"] = spec.kind;
  if (spec.kind == "zoo") {
    j["tag"] = spec.tag;
  } else if (spec.kind == "quadratic") {
    j["dimension"] = spec.dimension;
    j["mu"] = spec.mu;
    j["L"] = spec.L;
    j["center"] = spec.center;
  } else if (spec.kind == "halfspace") {
    j["seed"] = spec.data_seed;
    j["n"] = spec.n;
    j["d"] = spec.d;
    j["mean_separation"] = spec.mean_separation;
    j["variance"] = spec.variance;
    j["reg_lambda"] = spec.reg_lambda;
  }
  return j;
}

ProblemSpec problem_spec_from_json(const Json& j) {
  ProblemSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (spec.kind == "zoo") {
    spec.tag = j.at("tag").get<std::string>();
    zoo_tag_from_string(spec.tag);  // validate
  } else if (spec.kind == "quadratic") {
    spec.dimension = j.at("dimension").get<std::size_t>();
    spec.mu = j.at("mu").get<double>();
    spec.L = j.at("L").get<double>();
    if (j.contains("center")) spec.center = get_vec(j, "center");
  } else if (spec.kind == "halfspace") {
    spec.data_seed = j.value("seed", static_cast<std::uint64_t>(11));
    spec.n = j.value("n", static_cast<std::size_t>(40));
    spec.d = j.value("d", static_cast<std::size_t>(4));
    spec.mean_separation = get_number(j, "mean_separation", 4.0);
    spec.variance = get_number(j, "variance", 2.0);
    spec.reg_lambda = get_number(j, "reg_lambda", 1e-5);
  } else {
    throw Error(ErrorCode::CONFIG, "unknown problem kind: " + spec.kind);
  }
  return spec;
}

Json to_json(const RunSpec& spec) {
  Json j;
  j["problem"] = to_json(spec.problem);
  j["set"] = to_json(spec.set);
  j["policy"] = to_json(spec.policy);
  j["progress"] = to_json(spec.progress);
  j["x0"] = spec.x0;
  j["max_iters"] = spec.max_iters;
  j["batch_size"] = spec.batch_size;
  j["seed"] = spec.seed;
  j["record_iterates"] = spec.record_iterates;
  j["record_stride"] = spec.record_stride;
  j["alpha"] = spec.alpha;
  j["beta"] = to_json(spec.beta);
  return j;
}

RunSpec run_spec_from_json(const Json& j) {
  RunSpec spec;
  spec.problem = problem_spec_from_json(j.at("problem"));
  if (j.contains("set")) spec.set = set_spec_from_json(j.at("set"));
  spec.policy = policy_from_json(j.at("policy"));
  spec.progress = progress_from_json(j.at("progress"));
  spec.x0 = get_vec(j, "x0");
  spec.max_iters = j.value("max_iters", static_cast<std::size_t>(100));
  if (spec.max_iters < 1) throw Error(ErrorCode::CONFIG, "max_iters must be >= 1");
  spec.batch_size = j.value("batch_size", static_cast<std::size_t>(0));
  spec.seed = j.value("seed", static_cast<std::uint64_t>(0));
  spec.record_iterates = j.value("record_iterates", true);
  spec.record_stride = j.value("record_stride", static_cast<std::size_t>(0));
  spec.alpha = get_number(j, "alpha", 1.0);
  if (!(spec.alpha > 0.0) || !(spec.alpha < 2.0)) {
    throw Error(ErrorCode::CONFIG, "alpha must lie in (0, 2)");
  }
  if (j.contains("beta")) spec.beta = beta_from_json(j.at("beta"));
  return spec;
}

void apply_override(Json& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::CONFIG, "override must look like key.path=value: " +
                                        assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;  // plain string
  }

  Json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw Error(ErrorCode::CONFIG, "bad override path: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::CONFIG, "cannot open config: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::CONFIG, std::string("json parse: ") + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IO, "cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace ud
