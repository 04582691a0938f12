#include "ud/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ud/classify.hpp"
#include "ud/error.hpp"
#include "ud/zoo.hpp"

namespace ud {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json bound_to_json(const BoundCheck& check) {
  Json j;
  j["name"] = to_string(check.name);
  j["lhs"] = check.lhs;
  j["rhs"] = check.rhs;
  j["slack"] = check.slack;
  j["pass"] = check.pass;
  j["skipped"] = check.skipped;
  j["k"] = check.k;
  j["note"] = check.note;
  return j;
}

bool gammas_monotone(const TrajectoryRecord& record) {
  for (std::size_t k = 1; k < record.steps.size(); ++k) {
    if (record.steps[k].gamma > record.steps[k - 1].gamma * (1.0 + 1e-12)) {
      return false;
    }
  }
  return true;
}

double proxy_fstar(const TrajectoryRecord& record, const Problem& problem) {
  // tightest lower proxy available: the smallest full objective seen
  double best = problem.value(record.iterate_at(0));
  for (std::size_t k = 1; k <= record.steps.size(); ++k) {
    best = std::min(best, problem.value(record.iterate_at(k)));
  }
  return best;
}

struct OracleCase {
  const char* function;
  double c1;
  bool full_set;
  double singleton_at;
};

constexpr OracleCase kOracleCases[] = {
    {"f3", 1.0, false, 1.0}, {"f3", 1.0, true, 0.0}, {"f3", 0.1, true, 0.0},
    {"f4", 1.0, false, 0.0}, {"f4", 0.1, false, 0.0},
};

}  // namespace

RunSummary execute_run(const RunSpec& spec, const fs::path& out_dir) {
  const Problem problem = spec.problem.build();
  if (spec.set.kind == "proxy") {
    throw Error(ErrorCode::CONFIG, "runs need a concrete solution set");
  }
  const SolutionSet set = spec.set.resolve(problem);

  fs::create_directories(out_dir);
  if (spec.problem.kind == "halfspace") {
    write_halfspace_csv(spec.problem.build_dataset(),
                        (out_dir / "dataset.csv").string());
  }

  auto [record, summary] = spec.stochastic()
                               ? run_sgd(problem, set, spec.options())
                               : run_gd(problem, set, spec.options());

  write_trajectory_csv(record, (out_dir / "trajectory.csv").string());
  if (spec.record_iterates) {
    write_iterates_csv(record, (out_dir / "iterates.csv").string());
  }

  Json j;
  j["config"] = to_json(spec);
  Json s;
  s["status"] = to_string(summary.status);
  s["total_steps"] = summary.total_steps;
  s["min_progress"] = summary.min_progress;
  s["min_progress_k"] = summary.min_progress_k;
  s["gamma_min"] = summary.gamma_min;
  s["gamma_max"] = summary.gamma_max;
  s["final_x"] = summary.final_x;
  s["final_f"] = record.final_f;
  s["final_grad_norm_sq"] = record.final_grad_norm_sq;
  s["final_dist_sq"] = record.final_dist_sq;
  j["summary"] = s;
  write_json_file(j, (out_dir / "summary.json").string());
  return summary;
}

Json to_json(const CertifySpec& spec) {
  Json j;
  j["c1"] = spec.c1;
  j["c2"] = spec.c2 ? Json(*spec.c2) : Json(nullptr);
  j["progress"] = to_json(spec.progress);
  j["set"] = to_json(spec.set);
  j["alpha"] = spec.alpha;
  j["beta"] = to_json(spec.beta);
  j["L"] = spec.L ? Json(*spec.L) : Json(nullptr);
  j["G"] = spec.G ? Json(*spec.G) : Json(nullptr);
  j["mu"] = spec.mu ? Json(*spec.mu) : Json(nullptr);
  j["gamma_b"] = spec.gamma_b ? Json(*spec.gamma_b) : Json(nullptr);
  j["checks"] = spec.checks;
  return j;
}

CertifySpec certify_spec_from_json(const Json& j) {
  CertifySpec spec;
  spec.c1 = j.value("c1", 1.0);
  if (j.contains("c2") && !j.at("c2").is_null()) spec.c2 = j.at("c2").get<double>();
  spec.progress = progress_from_json(j.at("progress"));
  if (j.contains("set")) spec.set = set_spec_from_json(j.at("set"));
  spec.alpha = j.value("alpha", 1.0);
  if (j.contains("beta")) spec.beta = beta_from_json(j.at("beta"));
  for (const char* key : {"L", "G", "mu", "gamma_b"}) {
    if (j.contains(key) && !j.at(key).is_null()) {
      const double v = j.at(key).get<double>();
      if (std::string(key) == "L") spec.L = v;
      if (std::string(key) == "G") spec.G = v;
      if (std::string(key) == "mu") spec.mu = v;
      if (std::string(key) == "gamma_b") spec.gamma_b = v;
    }
  }
  if (j.contains("checks")) {
    for (const Json& c : j.at("checks")) spec.checks.push_back(c.get<std::string>());
  }
  return spec;
}

Json certify_run_dir(const fs::path& run_dir, const CertifySpec& cert) {
  const Json summary_json = load_json_file((run_dir / "summary.json").string());
  const RunSpec run_spec = run_spec_from_json(summary_json.at("config"));
  const Problem problem = run_spec.problem.build();

  const fs::path iterates_path = run_dir / "iterates.csv";
  if (!fs::exists(iterates_path)) {
    throw Error(ErrorCode::MISSING_ITERATES,
                "certification needs iterates.csv; rerun with record_iterates");
  }
  const TrajectoryRecord record = read_trajectory_csv(
      (run_dir / "trajectory.csv").string(), iterates_path.string());

  // Resolve the certification set and the progress constants.
  AssumptionParams params;
  params.c1 = cert.c1;
  params.alpha = cert.alpha;
  params.beta = cert.beta;
  params.progress = cert.progress;
  bool proxy_mode = false;
  if (cert.set.kind == "proxy") {
    proxy_mode = true;
    params.set.points = {record.final_x};
    params.set.kind = SetKind::PROXY;
  } else {
    params.set = cert.set.resolve(problem);
  }

  const bool needs_fstar = params.progress.kind == ProgressKind::GAP ||
                           params.progress.kind == ProgressKind::STRONG_GAP ||
                           params.progress.kind == ProgressKind::GAP_PLUS_GRAD;
  if (needs_fstar && !params.progress.fstar) {
    if (proxy_mode || !problem.known_fstar) {
      params.progress.fstar = proxy_fstar(record, problem);
    } else {
      params.progress.fstar = *problem.known_fstar;
    }
  }
  std::optional<double> L = cert.L;
  if (!L && problem.known_smoothness_L) L = *problem.known_smoothness_L;
  if (!L && run_spec.problem.kind == "halfspace") {
    L = halfspace_smoothness_bound(run_spec.problem.build_dataset());
  }
  const bool needs_L = params.progress.kind == ProgressKind::GRAD_NORM_OVER_L ||
                       params.progress.kind == ProgressKind::GAP_PLUS_GRAD ||
                       (params.progress.kind == ProgressKind::SAMPLE_GRAD_NORM &&
                        !params.progress.raw_grad_norm);
  if (needs_L && !params.progress.L) {
    if (!L) throw Error(ErrorCode::CONFIG, "progress kind needs L");
    params.progress.L = *L;
  }

  const ResidualReport rep = trajectory_constants(record, problem, params);
  params.c2 = cert.c2 ? *cert.c2 : rep.empirical_c2;

  const std::vector<BoundCheck> descent =
      check_descent_trajectory(record, problem, params);
  std::size_t descent_passed = 0;
  std::size_t descent_skipped = 0;
  std::optional<BoundCheck> worst;
  for (const BoundCheck& c : descent) {
    if (c.skipped) {
      ++descent_skipped;
      continue;
    }
    if (c.pass) ++descent_passed;
    const double rel = c.slack / std::max(1.0, std::abs(c.rhs));
    if (!worst ||
        rel < worst->slack / std::max(1.0, std::abs(worst->rhs))) {
      worst = c;
    }
  }

  const bool stochastic = !record.steps.empty() &&
                          !record.steps.front().sample_ids.empty();
  RateInputs extra;
  extra.L = L;
  extra.G = cert.G;
  extra.gamma_b = cert.gamma_b;
  if (!extra.gamma_b && run_spec.policy.cap) extra.gamma_b = *run_spec.policy.cap;

  std::vector<std::string> wanted = cert.checks;
  if (wanted.empty()) {
    if (stochastic) {
      wanted.push_back("THM2_MIN_P");
      if (L && params.progress.kind == ProgressKind::SAMPLE_GAP &&
          params.set.points.size() == 1 && cert.alpha == 1.0 &&
          cert.beta.kind == BetaKind::SAMPLE_GAP_AT_PROJ) {
        wanted.push_back("COR4");
      }
      if (gammas_monotone(record)) wanted.push_back("COR5");
    } else {
      wanted.push_back("THM1_MIN_P");
      const bool polyak_gap = run_spec.policy.kind == PolicyKind::POLYAK &&
                              params.progress.kind == ProgressKind::GAP &&
                              cert.alpha == 1.0 &&
                              cert.beta.kind == BetaKind::ZERO;
      if (L && polyak_gap) wanted.push_back("COR1");
      if (polyak_gap) wanted.push_back("COR2");
      if (gammas_monotone(record)) wanted.push_back("COR3");
      if (cert.mu && L && polyak_gap) wanted.push_back("EX2_LINEAR");
    }
  }

  Json bounds = Json::array();
  if (worst) {
    Json w = bound_to_json(*worst);
    w["note"] = "worst step of the per-step descent suite";
    bounds.push_back(w);
  }
  for (const std::string& name : wanted) {
    try {
      BoundCheck c;
      if (name == "EX2_LINEAR") {
        if (!cert.mu || !L) {
          throw Error(ErrorCode::HYPOTHESIS_VIOLATED, "EX2_LINEAR needs mu and L");
        }
        c = check_linear_rate(record, problem, params, *cert.mu, *L);
      } else {
        BoundName variant;
        if (name == "THM1_MIN_P") variant = BoundName::THM1_MIN_P;
        else if (name == "COR1") variant = BoundName::COR1;
        else if (name == "COR2") variant = BoundName::COR2;
        else if (name == "COR3") variant = BoundName::COR3;
        else if (name == "THM2_MIN_P") variant = BoundName::THM2_MIN_P;
        else if (name == "COR4") variant = BoundName::COR4;
        else if (name == "COR5") variant = BoundName::COR5;
        else throw Error(ErrorCode::CONFIG, "unknown check: " + name);
        c = check_min_progress(record, problem, params, variant, extra);
      }
      bounds.push_back(bound_to_json(c));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HYPOTHESIS_VIOLATED) throw;
      Json skipped;
      skipped["name"] = name;
      skipped["lhs"] = nullptr;
      skipped["rhs"] = nullptr;
      skipped["slack"] = nullptr;
      skipped["k"] = 0;
      skipped["skipped"] = true;
      skipped["pass"] = false;
      skipped["note"] = e.what();
      bounds.push_back(skipped);
    }
  }

  Json report;
  report["run_id"] = run_dir.filename().string();
  Json p;
  p["c1"] = params.c1;
  p["c2"] = params.c2;
  p["progress"] = to_json(params.progress);
  Json set_json;
  set_json["kind"] = proxy_mode ? "proxy" : cert.set.kind;
  Json pts = Json::array();
  for (const Vec& v : params.set.points) pts.push_back(v);
  set_json["points"] = pts;
  p["set"] = set_json;
  p["alpha"] = params.alpha;
  p["beta"] = to_json(params.beta);
  report["params"] = p;
  report["empirical_c2"] = rep.empirical_c2;
  report["max_residual"] = rep.max_residual;
  report["mean_residual"] = rep.mean_residual;
  report["mean_c2"] = rep.mean_c2;
  report["negative_P_count"] = rep.negative_progress_count;
  report["points"] = rep.points;
  Json d;
  d["checked"] = descent.size();
  d["passed"] = descent_passed;
  d["skipped"] = descent_skipped;
  report["descent"] = d;
  report["bounds"] = bounds;

  if (problem.dimension == 1 && !is_sample_kind(params.progress.kind)) {
    try {
      Json oracle;
      oracle["value"] = global_c2_1d(problem, params, -10.0, 10.0, 1e-6);
      oracle["tol"] = 1e-6;
      report["oracle"] = oracle;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BOUNDARY_MAX) throw;
      report["oracle"] = nullptr;
    }
  } else {
    report["oracle"] = nullptr;
  }

  {
    std::ofstream series((run_dir / "c2_series.csv").string());
    if (!series) throw Error(ErrorCode::IO, "cannot write c2_series.csv");
    series << "k,residual,c2xi\n";
    for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
      series << i << "," << fmt17(rep.residuals[i]) << ","
             << fmt17(std::max(0.0, rep.residuals[i])) << "\n";
    }
  }
  write_json_file(report, (run_dir / "report.json").string());
  return report;
}

Json aggregate_reports(const std::vector<Json>& reports,
                       const std::vector<fs::path>& run_dirs,
                       const fs::path& out_dir) {
  if (reports.empty()) throw Error(ErrorCode::CONFIG, "nothing to aggregate");
  fs::create_directories(out_dir);

  auto stat_of = [&](const char* key) {
    Json s;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const Json& r : reports) {
      const double v = r.at(key).get<double>();
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      sum += v;
    }
    s["mean"] = sum / static_cast<double>(reports.size());
    s["min"] = mn;
    s["max"] = mx;
    return s;
  };

  Json agg;
  agg["runs"] = reports.size();
  agg["empirical_c2"] = stat_of("empirical_c2");
  agg["mean_c2"] = stat_of("mean_c2");
  agg["mean_residual"] = stat_of("mean_residual");
  bool all_pass = true;
  for (const Json& r : reports) {
    for (const Json& b : r.at("bounds")) {
      if (!b.value("skipped", false) && !b.value("pass", false)) all_pass = false;
    }
    const Json& d = r.at("descent");
    if (d.at("passed").get<std::size_t>() + d.at("skipped").get<std::size_t>() !=
        d.at("checked").get<std::size_t>()) {
      all_pass = false;
    }
  }
  agg["bounds_all_pass"] = all_pass;

  // per-step series across runs, truncated to the shortest
  std::vector<std::vector<double>> series;
  for (const fs::path& dir : run_dirs) {
    std::ifstream in((dir / "c2_series.csv").string());
    if (!in) throw Error(ErrorCode::IO, "missing c2_series.csv in " + dir.string());
    std::string line;
    std::getline(in, line);
    std::vector<double> s;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::size_t first = line.find(',');
      const std::size_t second = line.find(',', first + 1);
      s.push_back(std::stod(line.substr(second + 1)));
    }
    series.push_back(std::move(s));
  }
  std::size_t len = series[0].size();
  for (const auto& s : series) len = std::min(len, s.size());
  {
    std::ofstream out((out_dir / "c2_aggregate.csv").string());
    if (!out) throw Error(ErrorCode::IO, "cannot write c2_aggregate.csv");
    out << "k,mean,min,max\n";
    for (std::size_t k = 0; k < len; ++k) {
      double mn = series[0][k];
      double mx = series[0][k];
      double sum = 0.0;
      for (const auto& s : series) {
        mn = std::min(mn, s[k]);
        mx = std::max(mx, s[k]);
        sum += s[k];
      }
      out << k << "," << fmt17(sum / static_cast<double>(series.size())) << ","
          << fmt17(mn) << "," << fmt17(mx) << "\n";
    }
  }
  write_json_file(agg, (out_dir / "aggregate.json").string());
  return agg;
}

Json oracle_table() {
  Json cases = Json::array();
  for (const OracleCase& oc : kOracleCases) {
    const Problem problem = make_zoo_problem(zoo_tag_from_string(oc.function));
    AssumptionParams params;
    params.c1 = oc.c1;
    params.progress.kind = ProgressKind::GAP;
    params.progress.fstar = 0.0;
    if (oc.full_set) {
      params.set = *problem.known_minimizers;
    } else {
      params.set = singleton(Vec{oc.singleton_at});
    }
    Json c;
    c["function"] = oc.function;
    c["c1"] = oc.c1;
    c["set"] = oc.full_set ? std::string("full")
                           : "singleton[" + fmt17(oc.singleton_at) + "]";
    c["value"] = global_c2_1d(problem, params, -10.0, 10.0, 1e-6);
    c["tol"] = 1e-6;
    cases.push_back(c);
  }
  Json j;
  j["cases"] = cases;
  return j;
}

Json classification_table() {
  Json entries = Json::array();
  const auto cells = table_cells();
  for (ZooTag tag : kAllZooTags) {
    const Problem problem = make_zoo_problem(tag);
    for (const TableCell& cell : cells) {
      const ClassifyResult res = classify_function(problem, cell);
      Json e;
      e["function"] = to_string(tag);
      e["cell"] = cell_label(cell);
      e["verdict"] = to_string(res.verdict);
      e["c1"] = res.c1;
      e["c2"] = res.c2;
      e["witness_x"] = res.witness_x ? Json(*res.witness_x) : Json(nullptr);
      e["justification"] = res.justification;
      entries.push_back(e);
    }
  }
  Json j;
  j["cells"] = Json::array();
  for (const TableCell& cell : cells) j["cells"].push_back(cell_label(cell));
  j["entries"] = entries;
  return j;
}

Json zoo_table() {
  Json functions = Json::array();
  for (ZooTag tag : kAllZooTags) {
    const Problem problem = make_zoo_problem(tag);
    Json f;
    f["tag"] = to_string(tag);
    f["fstar"] = *problem.known_fstar;
    Json mins = Json::array();
    for (const Vec& m : problem.known_minimizers->points) mins.push_back(m[0]);
    f["minimizers"] = mins;
    f["smoothness_L"] = problem.known_smoothness_L
                            ? Json(*problem.known_smoothness_L)
                            : Json(nullptr);
    functions.push_back(f);
  }
  Json j;
  j["functions"] = functions;
  return j;
}

}  // namespace ud
