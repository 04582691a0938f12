#include <cmath>
#include <map>
#include <string>

#include <doctest.h>

#include "ud/classify.hpp"
#include "ud/zoo.hpp"

using namespace ud;

namespace {

// Membership reference for the six cells, in table_cells() order:
// (c1=1,c2=0), (c1=1,c2>=0), (free,c2=0), (free,c2>=0), (free,c2=0,S),
// (free,c2>=0,S).
const std::map<std::string, std::array<bool, 6>> kExpected = {
    {"f1", {true, true, true, true, true, true}},
    {"f2", {false, false, true, true, true, true}},
    {"f3", {false, true, false, true, false, true}},
    {"f4", {false, true, false, true, false, true}},
    {"f5", {false, false, false, true, false, true}},
};

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("membership matrix matches the reference table") {
  const auto cells = table_cells();
  for (ZooTag tag : kAllZooTags) {
    const Problem problem = make_zoo_problem(tag);
    const auto& expected = kExpected.at(to_string(tag));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const ClassifyResult res = classify_function(problem, cells[i]);
      INFO(to_string(tag), " cell ", cell_label(cells[i]));
      CHECK(res.verdict == (expected[i] ? Verdict::IN : Verdict::OUT));
      if (res.verdict == Verdict::OUT) {
        CHECK(res.witness_x.has_value());
      }
    }
  }
}

TEST_CASE("certified constants carry the expected values") {
  // f2 sits in the weak quasi-convex cell with c1 = 1/2 exactly
  const Problem f2 = make_zoo_problem(ZooTag::F2_SQRT_TAIL);
  const TableCell free_c1_zero_c2{false, true, false};
  const ClassifyResult res = classify_function(f2, free_c1_zero_c2);
  REQUIRE(res.verdict == Verdict::IN);
  CHECK(std::abs(res.c1 - 0.5) <= 1e-3);
  CHECK(res.c2 == 0.0);

  // f3 in the (c1=1, c2>=0) cell certifies the singleton constant
  const Problem f3 = make_zoo_problem(ZooTag::F3_DOUBLE_WELL);
  const TableCell fixed_c1_free_c2{true, false, false};
  const ClassifyResult res3 = classify_function(f3, fixed_c1_free_c2);
  REQUIRE(res3.verdict == Verdict::IN);
  CHECK(std::abs(res3.c2 - 1.437) <= 1e-3);

  // f1 is convex: the (c1=1, c2=0) cell holds with no slack
  const Problem f1 = make_zoo_problem(ZooTag::F1_SQUARE);
  const TableCell base{true, true, false};
  const ClassifyResult res1 = classify_function(f1, base);
  CHECK(res1.verdict == Verdict::IN);
  CHECK(res1.c1 == 1.0);
  CHECK(res1.c2 == 0.0);
}

TEST_CASE("out witnesses defeat a fixed c1") {
  // f4 with c1 = 1 and c2 = 0: the witness must have a positive residual
  const Problem f4 = make_zoo_problem(ZooTag::F4_LOCAL_MIN);
  const TableCell cell{true, true, false};
  const ClassifyResult res = classify_function(f4, cell);
  REQUIRE(res.verdict == Verdict::OUT);
  REQUIRE(res.witness_x.has_value());
  AssumptionParams params;
  params.c1 = 1.0;
  params.progress.kind = ProgressKind::GAP;
  params.progress.fstar = 0.0;
  params.set = singleton(Vec{0.0});
  CHECK(residual_at(f4, {*res.witness_x}, params) > 0.0);
}

}  // TEST_SUITE
