#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ud/certify.hpp"
#include "ud/zoo.hpp"

namespace ud {

// One cell of the function-class table for P = f - f*: whether c1 is pinned
// to 1 or free, whether c2 must vanish, and whether S~ is a single minimizer
// or the full minimizer set.
struct TableCell {
  bool c1_fixed_one = true;
  bool c2_zero = true;
  bool full_set = false;
};

// The six cells in table order: (c1=1, {x*}) x {c2=0, c2>=0},
// (c1 free, {x*}) x {c2=0, c2>=0}, (c1 free, S) x {c2=0, c2>=0}.
std::array<TableCell, 6> table_cells();
std::string cell_label(const TableCell& cell);

enum class Verdict { IN, OUT, INCONCLUSIVE };
const char* to_string(Verdict v) noexcept;

struct ClassifyResult {
  Verdict verdict = Verdict::INCONCLUSIVE;
  double c1 = 1.0;  // certified constant when IN
  double c2 = 0.0;
  std::optional<double> witness_x;  // failure point when OUT
  std::string justification;
};

struct ClassifyOptions {
  double lo = -10.0;
  double hi = 10.0;
  std::size_t grid_points = 100000;
  double tol = 1e-6;
  // grid of candidate c1 values for free-c1 cells: 2^-6 .. 2^1
  int c1_pow_lo = -6;
  int c1_pow_hi = 1;
  std::size_t max_evals = 50000000;  // INCONCLUSIVE once exhausted
};

// Grid-certified membership of a 1-D problem in a table cell. IN comes with
// constants from the global residual search; OUT carries a witness point
// where the inequality fails for every searched constant. Non-membership is
// grid evidence, not a proof.
ClassifyResult classify_function(const Problem& problem, const TableCell& cell,
                                 const ClassifyOptions& opts = {});

}  // namespace ud
