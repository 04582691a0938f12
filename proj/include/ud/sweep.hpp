#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ud/run_spec.hpp"

namespace ud {

// Grid sweep over a base run config: every grid assignment is applied as a
// dotted-key override, crossed with the seed list. Keys starting with
// "certify." override the optional certification request instead.
struct SweepSpec {
  Json base_config;                          // run-config object
  std::vector<std::uint64_t> seeds;          // crossed with the grid
  std::vector<std::pair<std::string, std::vector<Json>>> grid;
  Json certify;  // certify-spec object; null = run only

  static SweepSpec from_json(const Json& j);
};

struct SweepOutcome {
  std::size_t total = 0;
  std::size_t failed = 0;
};

// Runs all grid x seed combinations concurrently, each into its own
// subdirectory (staged, then renamed into place), and writes aggregate.csv
// with one row per combination in grid order. Per-run failures land in the
// row's error column; the sweep itself only fails when everything does.
SweepOutcome run_sweep(const SweepSpec& spec,
                       const std::filesystem::path& out_dir,
                       std::size_t workers = 0);

}  // namespace ud
