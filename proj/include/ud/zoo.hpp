#pragma once

#include <array>
#include <string>

#include "ud/problem.hpp"

namespace ud {

// One-dimensional test functions with known minimizer sets and f* = 0.
//   f1 = x^2
//   f2 = x^2 for x >= -1, 4*sqrt(-x) - 3 for x < -1
//   f3 = x^4/2 - x^2 + 1/2          (two global minima, at -1 and 1)
//   f4 = x^4 - (10/3)x^3 + 3x^2     (non-global critical point at 1.5)
//   f5 = f4 for x >= 0, f2 for x < 0
enum class ZooTag { F1_SQUARE, F2_SQRT_TAIL, F3_DOUBLE_WELL, F4_LOCAL_MIN, F5_PIECEWISE };

inline constexpr std::array<ZooTag, 5> kAllZooTags = {
    ZooTag::F1_SQUARE, ZooTag::F2_SQRT_TAIL, ZooTag::F3_DOUBLE_WELL,
    ZooTag::F4_LOCAL_MIN, ZooTag::F5_PIECEWISE};

const char* to_string(ZooTag tag) noexcept;           // "f1".."f5"
ZooTag zoo_tag_from_string(const std::string& name);  // throws CONFIG

double zoo_value(ZooTag tag, double x);
double zoo_derivative(ZooTag tag, double x);

Problem make_zoo_problem(ZooTag tag);

}  // namespace ud
