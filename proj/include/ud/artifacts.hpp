#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ud/certify.hpp"
#include "ud/run_spec.hpp"

namespace ud {

// Executes the configured run and writes trajectory.csv, iterates.csv (when
// recorded), dataset.csv (halfspace) and summary.json into out_dir. Artifacts
// carry no timestamps, so identical configs produce byte-identical files.
RunSummary execute_run(const RunSpec& spec, const std::filesystem::path& out_dir);

// Certification request against finished run artifacts.
struct CertifySpec {
  double c1 = 1.0;
  std::optional<double> c2;  // default: the run's empirical c2
  ProgressSpec progress;
  SetSpec set;  // "known", explicit points, or "proxy" = {final iterate}
  double alpha = 1.0;
  BetaSchedule beta;
  std::optional<double> L;
  std::optional<double> G;
  std::optional<double> mu;
  std::optional<double> gamma_b;
  std::vector<std::string> checks;  // bound names to force; empty = automatic
};

Json to_json(const CertifySpec& spec);
CertifySpec certify_spec_from_json(const Json& j);

// Reads the run artifacts, measures the trajectory residuals, runs every
// applicable bound check and writes report.json plus c2_series.csv next to
// them. Returns the report. Repeated certification is byte-idempotent.
Json certify_run_dir(const std::filesystem::path& run_dir, const CertifySpec& spec);

// Aggregate across several certified runs (typically seeds of one config):
// per-step mean/min/max of the clamped residual series to c2_aggregate.csv
// under out_dir, plus an aggregate.json of scalar statistics.
Json aggregate_reports(const std::vector<Json>& reports,
                       const std::vector<std::filesystem::path>& run_dirs,
                       const std::filesystem::path& out_dir);

// The five reference constants of the 1-D residual supremum search.
Json oracle_table();

// Membership matrix of the five zoo functions over the six table cells.
Json classification_table();

// Metadata of the built-in 1-D functions.
Json zoo_table();

}  // namespace ud
