// ud: run, certify and sweep gradient-descent experiments, and reproduce the
// residual-supremum constants and function-class table of the built-in 1-D
// zoo. Emits JSON for configs/reports and CSV for series; no plotting.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ud/artifacts.hpp"
#include "ud/error.hpp"
#include "ud/sweep.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(const ud::Error& e) {
  switch (e.code()) {
    case ud::ErrorCode::CONFIG:
    case ud::ErrorCode::DIMENSION_MISMATCH:
    case ud::ErrorCode::IO:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

fs::path default_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("UD_OUTPUT_DIR")) return env;
  return ".";
}

ud::Json config_with_overrides(const std::string& config_path,
                               const std::vector<std::string>& overrides) {
  ud::Json config = ud::load_json_file(config_path);
  for (const std::string& assignment : overrides) {
    ud::apply_override(config, assignment);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient-descent runs with trajectory certification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::vector<std::string> overrides;
  std::vector<std::string> run_dirs;
  std::string seeds_flag;

  CLI::App* cmd_run = app.add_subcommand("run", "execute one configured run");
  cmd_run->add_option("--config", config_path, "run-config JSON")->required();
  cmd_run->add_option("--out", out_flag, "output directory");
  cmd_run->add_option("--set", overrides, "dotted-key override, e.g. policy.c1=0.5");

  CLI::App* cmd_certify =
      app.add_subcommand("certify", "measure constants and check bounds");
  cmd_certify->add_option("--config", config_path, "certify-spec JSON")->required();
  cmd_certify->add_option("--run-dir", run_dirs, "run artifact directories")
      ->required();
  cmd_certify->add_option("--out", out_flag, "aggregate output directory");
  cmd_certify->add_option("--set", overrides, "dotted-key override");

  CLI::App* cmd_oracle =
      app.add_subcommand("oracle", "residual-supremum constants of the zoo");
  cmd_oracle->add_option("--out", out_flag, "output directory");

  CLI::App* cmd_classify =
      app.add_subcommand("classify", "function-class membership table");
  cmd_classify->add_option("--out", out_flag, "output directory");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "grid x seed sweep");
  cmd_sweep->add_option("--config", config_path, "sweep-spec JSON")->required();
  cmd_sweep->add_option("--out", out_flag, "output directory");
  cmd_sweep->add_option("--seeds", seeds_flag, "comma-separated seed list");
  cmd_sweep->add_option("--set", overrides, "override on the base config");

  CLI::App* cmd_zoo = app.add_subcommand("zoo", "built-in 1-D function metadata");
  cmd_zoo->add_option("--out", out_flag, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      const ud::Json config = config_with_overrides(config_path, overrides);
      const ud::RunSpec spec = ud::run_spec_from_json(config);
      const fs::path dir = default_output_dir(out_flag);
      const ud::RunSummary summary = ud::execute_run(spec, dir);
      std::cout << "status=" << ud::to_string(summary.status)
                << " steps=" << summary.total_steps << " out=" << dir.string()
                << "\n";
      if (summary.status == ud::Termination::POLICY_ERROR) {
        std::cerr << "policy error during the run; see summary.json\n";
        return kExitRuntime;
      }
      return kExitOk;
    }
    if (cmd_certify->parsed()) {
      const ud::Json config = config_with_overrides(config_path, overrides);
      const ud::CertifySpec spec = ud::certify_spec_from_json(config);
      std::vector<ud::Json> reports;
      std::vector<fs::path> dirs;
      for (const std::string& dir : run_dirs) {
        reports.push_back(ud::certify_run_dir(dir, spec));
        dirs.emplace_back(dir);
        std::cout << "certified " << dir
                  << " empirical_c2=" << reports.back().at("empirical_c2")
                  << "\n";
      }
      if (reports.size() > 1) {
        const fs::path agg_dir = default_output_dir(out_flag);
        const ud::Json agg = ud::aggregate_reports(reports, dirs, agg_dir);
        std::cout << "aggregate bounds_all_pass=" << agg.at("bounds_all_pass")
                  << " out=" << agg_dir.string() << "\n";
      }
      return kExitOk;
    }
    if (cmd_oracle->parsed()) {
      const ud::Json table = ud::oracle_table();
      const fs::path dir = default_output_dir(out_flag);
      fs::create_directories(dir);
      ud::write_json_file(table, (dir / "oracle.json").string());
      std::cout << table.dump(2) << "\n";
      return kExitOk;
    }
    if (cmd_classify->parsed()) {
      const ud::Json table = ud::classification_table();
      const fs::path dir = default_output_dir(out_flag);
      fs::create_directories(dir);
      ud::write_json_file(table, (dir / "classification.json").string());
      std::cout << table.dump(2) << "\n";
      for (const ud::Json& e : table.at("entries")) {
        if (e.at("verdict").get<std::string>() == "INCONCLUSIVE") {
          std::cerr << "inconclusive cell: " << e.at("function") << " "
                    << e.at("cell") << "\n";
        }
      }
      return kExitOk;
    }
    if (cmd_sweep->parsed()) {
      ud::Json spec_json = ud::load_json_file(config_path);
      for (const std::string& assignment : overrides) {
        ud::Json base = spec_json.value("base", ud::Json::object());
        ud::apply_override(base, assignment);
        spec_json["base"] = base;
      }
      if (!seeds_flag.empty()) {
        ud::Json seeds = ud::Json::array();
        std::size_t start = 0;
        while (start <= seeds_flag.size()) {
          const std::size_t comma = seeds_flag.find(',', start);
          seeds.push_back(std::stoull(
              seeds_flag.substr(start, comma - start)));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        spec_json["seeds"] = seeds;
      }
      const ud::SweepSpec spec = ud::SweepSpec::from_json(spec_json);
      const fs::path dir = default_output_dir(out_flag);
      const ud::SweepOutcome outcome = ud::run_sweep(spec, dir);
      std::cout << "sweep total=" << outcome.total
                << " failed=" << outcome.failed << " out=" << dir.string()
                << "\n";
      if (outcome.failed == outcome.total) {
        std::cerr << "every combination failed\n";
        return kExitRuntime;
      }
      return kExitOk;
    }
    if (cmd_zoo->parsed()) {
      const ud::Json table = ud::zoo_table();
      const fs::path dir = default_output_dir(out_flag);
      fs::create_directories(dir);
      ud::write_json_file(table, (dir / "zoo.json").string());
      std::cout << table.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const ud::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
