#include "ud/zoo.hpp"

#include <cmath>

#include "ud/error.hpp"

namespace ud {

namespace {

double f1(double x) { return x * x; }
double d1(double x) { return 2.0 * x; }

double f2(double x) { return x >= -1.0 ? x * x : 4.0 * std::sqrt(-x) - 3.0; }
double d2(double x) { return x >= -1.0 ? 2.0 * x : -2.0 / std::sqrt(-x); }

double f3(double x) {
  const double x2 = x * x;
  return 0.5 * x2 * x2 - x2 + 0.5;
}
double d3(double x) { return 2.0 * x * x * x - 2.0 * x; }

double f4(double x) {
  const double x2 = x * x;
  return x2 * x2 - (10.0 / 3.0) * x2 * x + 3.0 * x2;
}
double d4(double x) { return 4.0 * x * x * x - 10.0 * x * x + 6.0 * x; }

double f5(double x) { return x >= 0.0 ? f4(x) : f2(x); }
double d5(double x) { return x >= 0.0 ? d4(x) : d2(x); }

}  // namespace

const char* to_string(ZooTag tag) noexcept {
  switch (tag) {
    case ZooTag::F1_SQUARE: return "f1";
    case ZooTag::F2_SQRT_TAIL: return "f2";
    case ZooTag::F3_DOUBLE_WELL: return "f3";
    case ZooTag::F4_LOCAL_MIN: return "f4";
    case ZooTag::F5_PIECEWISE: return "f5";
  }
  return "?";
}

ZooTag zoo_tag_from_string(const std::string& name) {
  for (ZooTag tag : kAllZooTags) {
    if (name == to_string(tag)) return tag;
  }
  throw Error(ErrorCode::CONFIG, "unknown zoo function: " + name);
}

double zoo_value(ZooTag tag, double x) {
  switch (tag) {
    case ZooTag::F1_SQUARE: return f1(x);
    case ZooTag::F2_SQRT_TAIL: return f2(x);
    case ZooTag::F3_DOUBLE_WELL: return f3(x);
    case ZooTag::F4_LOCAL_MIN: return f4(x);
    case ZooTag::F5_PIECEWISE: return f5(x);
  }
  throw Error(ErrorCode::CONFIG, "bad zoo tag");
}

double zoo_derivative(ZooTag tag, double x) {
  switch (tag) {
    case ZooTag::F1_SQUARE: return d1(x);
    case ZooTag::F2_SQRT_TAIL: return d2(x);
    case ZooTag::F3_DOUBLE_WELL: return d3(x);
    case ZooTag::F4_LOCAL_MIN: return d4(x);
    case ZooTag::F5_PIECEWISE: return d5(x);
  }
  throw Error(ErrorCode::CONFIG, "bad zoo tag");
}

Problem make_zoo_problem(ZooTag tag) {
  Problem p;
  p.name = to_string(tag);
  p.dimension = 1;
  p.value = [tag](const Vec& x) { return zoo_value(tag, x[0]); };
  p.gradient = [tag](const Vec& x) { return Vec{zoo_derivative(tag, x[0])}; };

  SolutionSet minima;
  minima.kind = SetKind::SINGLETON;
  if (tag == ZooTag::F3_DOUBLE_WELL) {
    minima.points = {Vec{-1.0}, Vec{1.0}};
    minima.kind = SetKind::FINITE;
  } else {
    minima.points = {Vec{0.0}};
  }
  p.known_minimizers = minima;
  p.known_fstar = 0.0;
  // Second derivatives of f3..f5 are unbounded on the right, so only the
  // globally smooth members carry an L.
  if (tag == ZooTag::F1_SQUARE || tag == ZooTag::F2_SQRT_TAIL) {
    p.known_smoothness_L = 2.0;
  }
  return p;
}

}  // namespace ud
