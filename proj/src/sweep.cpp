#include "ud/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "ud/artifacts.hpp"
#include "ud/error.hpp"

namespace ud {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_cell(const Json& v) {
  if (v.is_number()) return fmt17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

struct Combination {
  std::size_t index;
  std::uint64_t seed;
  std::vector<std::pair<std::string, Json>> assignments;
  std::string run_id;
};

struct RowResult {
  bool ok = false;
  std::string error;
  Json summary;       // summary.json contents
  Json report;        // certification report, when requested
  double min_inner = 0.0;
};

}  // namespace

SweepSpec SweepSpec::from_json(const Json& j) {
  SweepSpec spec;
  spec.base_config = j.at("base");
  if (j.contains("seeds")) {
    for (const Json& s : j.at("seeds")) {
      spec.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  if (spec.seeds.empty()) {
    spec.seeds.push_back(spec.base_config.value("seed", 0ULL));
  }
  if (j.contains("grid")) {
    for (const auto& [key, values] : j.at("grid").items()) {
      std::vector<Json> list;
      if (values.is_array()) {
        for (const Json& v : values) list.push_back(v);
      } else {
        list.push_back(values);
      }
      if (list.empty()) throw Error(ErrorCode::CONFIG, "empty grid axis: " + key);
      spec.grid.emplace_back(key, std::move(list));
    }
  }
  spec.certify = j.value("certify", Json(nullptr));
  return spec;
}

SweepOutcome run_sweep(const SweepSpec& spec, const fs::path& out_dir,
                       std::size_t workers) {
  if (spec.seeds.empty()) throw Error(ErrorCode::CONFIG, "sweep needs seeds");
  for (const auto& [key, values] : spec.grid) {
    if (values.empty()) throw Error(ErrorCode::CONFIG, "empty grid axis: " + key);
  }

  // Enumerate grid points in row-major order of the (sorted) grid keys.
  std::vector<Combination> combos;
  std::size_t grid_size = 1;
  for (const auto& [key, values] : spec.grid) grid_size *= values.size();
  for (std::size_t g = 0; g < grid_size; ++g) {
    std::vector<std::pair<std::string, Json>> assignments;
    std::size_t rest = g;
    for (const auto& [key, values] : spec.grid) {
      assignments.emplace_back(key, values[rest % values.size()]);
      rest /= values.size();
    }
    for (std::uint64_t seed : spec.seeds) {
      Combination c;
      c.index = combos.size();
      c.seed = seed;
      c.assignments = assignments;
      c.run_id = "g" + std::to_string(g) + "_s" + std::to_string(seed);
      combos.push_back(std::move(c));
    }
  }
  if (combos.empty()) throw Error(ErrorCode::CONFIG, "sweep grid is empty");

  fs::create_directories(out_dir);
  std::vector<RowResult> rows(combos.size());

  auto run_one = [&](const Combination& combo) {
    RowResult& row = rows[combo.index];
    const fs::path final_dir = out_dir / combo.run_id;
    const fs::path stage_dir = out_dir / ("." + combo.run_id + ".tmp");
    try {
      Json config = spec.base_config;
      Json cert_json = spec.certify;
      for (const auto& [key, value] : combo.assignments) {
        if (key.rfind("certify.", 0) == 0) {
          if (cert_json.is_null()) cert_json = Json::object();
          apply_override(cert_json, key.substr(8) + "=" + value.dump());
        } else {
          apply_override(config, key + "=" + value.dump());
        }
      }
      config["seed"] = combo.seed;
      const RunSpec run = run_spec_from_json(config);

      fs::remove_all(stage_dir);
      execute_run(run, stage_dir);
      if (!cert_json.is_null()) {
        row.report = certify_run_dir(stage_dir, certify_spec_from_json(cert_json));
      }
      row.summary = load_json_file((stage_dir / "summary.json").string());

      // min inner product along the run flags steps where the alignment
      // turned negative (monotonicity of c2 in c1 is not expected there)
      const TrajectoryRecord rec =
          read_trajectory_csv((stage_dir / "trajectory.csv").string());
      double mn = 0.0;
      for (std::size_t k = 0; k < rec.steps.size(); ++k) {
        mn = std::min(mn, rec.steps[k].inner_prod);
      }
      row.min_inner = mn;

      fs::remove_all(final_dir);
      fs::rename(stage_dir, final_dir);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      std::error_code ec;
      fs::remove_all(stage_dir, ec);
    }
  };

  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, combos.size()); ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= combos.size()) return;
        run_one(combos[i]);
      }
    });
  }
  for (std::thread& t : pool) t.join();

  // Aggregate rows in combination order so reruns are byte-identical.
  const bool certified = !spec.certify.is_null();
  std::ofstream agg((out_dir / "aggregate.csv").string());
  if (!agg) throw Error(ErrorCode::IO, "cannot write aggregate.csv");
  agg << "run_id";
  for (const auto& [key, values] : spec.grid) agg << "," << key;
  agg << ",seed,ok,status,total_steps,min_progress,gamma_min,gamma_max,"
         "final_f,min_inner_prod";
  if (certified) agg << ",empirical_c2,mean_c2,negative_P_count,bounds_all_pass";
  agg << ",error\n";

  SweepOutcome outcome;
  outcome.total = combos.size();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const Combination& combo = combos[i];
    const RowResult& row = rows[i];
    agg << combo.run_id;
    for (const auto& [key, value] : combo.assignments) {
      agg << "," << json_cell(value);
    }
    agg << "," << combo.seed << "," << (row.ok ? 1 : 0);
    if (row.ok) {
      const Json& s = row.summary.at("summary");
      agg << "," << s.at("status").get<std::string>() << ","
          << s.at("total_steps").get<std::size_t>() << ","
          << fmt17(s.at("min_progress").get<double>()) << ","
          << fmt17(s.at("gamma_min").get<double>()) << ","
          << fmt17(s.at("gamma_max").get<double>()) << ","
          << fmt17(s.at("final_f").get<double>()) << ","
          << fmt17(row.min_inner);
      if (certified) {
        bool all_pass = true;
        for (const Json& b : row.report.at("bounds")) {
          if (!b.value("skipped", false) && !b.value("pass", false)) {
            all_pass = false;
          }
        }
        agg << "," << fmt17(row.report.at("empirical_c2").get<double>()) << ","
            << fmt17(row.report.at("mean_c2").get<double>()) << ","
            << row.report.at("negative_P_count").get<std::size_t>() << ","
            << (all_pass ? 1 : 0);
      }
      agg << ",";
    } else {
      agg << ",,,,,,,";
      if (certified) agg << ",,,,";
      std::string err = row.error;
      for (char& ch : err) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      agg << "," << err;
      ++outcome.failed;
    }
    agg << "\n";
  }
  return outcome;
}

}  // namespace ud
