#include <cmath>

#include <doctest.h>

#include "ud/error.hpp"
#include "ud/halfspace.hpp"
#include "ud/quadratic.hpp"
#include "ud/rng.hpp"
#include "ud/zoo.hpp"

using namespace ud;

namespace {

double uniform_in(CounterRng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_unit();
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("zoo closed forms at pinned points") {
  const Problem f3 = make_zoo_problem(ZooTag::F3_DOUBLE_WELL);
  CHECK(f3.value({0.0}) == doctest::Approx(0.5).epsilon(1e-15));

  const Problem f1 = make_zoo_problem(ZooTag::F1_SQUARE);
  CHECK(f1.gradient({0.0})[0] == 0.0);

  // 4x^3 - 10x^2 + 6x = 2x(2x-3)(x-1) vanishes at the non-global critical
  // point x = 1.5
  const Problem f4 = make_zoo_problem(ZooTag::F4_LOCAL_MIN);
  CHECK(f4.gradient({1.5})[0] == 0.0);
  CHECK(f4.value({1.5}) == doctest::Approx(0.5625));
}

TEST_CASE("zoo metadata") {
  for (ZooTag tag : kAllZooTags) {
    const Problem p = make_zoo_problem(tag);
    REQUIRE(p.known_minimizers.has_value());
    CHECK(*p.known_fstar == 0.0);
    for (const Vec& m : p.known_minimizers->points) {
      CHECK(p.value(m) == doctest::Approx(0.0).epsilon(1e-15));
      CHECK(p.gradient(m)[0] == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  const Problem f3 = make_zoo_problem(ZooTag::F3_DOUBLE_WELL);
  REQUIRE(f3.known_minimizers->points.size() == 2);
  CHECK(f3.known_minimizers->points[0][0] == -1.0);
  CHECK(f3.known_minimizers->points[1][0] == 1.0);
}

TEST_CASE("zoo derivatives match central differences on random points") {
  CounterRng rng(2024, 11);
  for (ZooTag tag : kAllZooTags) {
    const Problem p = make_zoo_problem(tag);
    for (int i = 0; i < 1000; ++i) {
      const double x = uniform_in(rng, -5.0, 5.0);
      // keep probes away from the piecewise joints where the stencil
      // straddles two branches
      if (tag == ZooTag::F2_SQRT_TAIL && std::abs(x + 1.0) < 1e-4) continue;
      if (tag == ZooTag::F5_PIECEWISE &&
          (std::abs(x) < 1e-4 || std::abs(x + 1.0) < 1e-4)) {
        continue;
      }
      const double fd = finite_difference_gradient(p, {x}, 1e-6)[0];
      CHECK(std::abs(p.gradient({x})[0] - fd) <= 1e-5);
    }
  }
}

TEST_CASE("f2 and f5 are C^1 at their break points") {
  const Problem f2 = make_zoo_problem(ZooTag::F2_SQRT_TAIL);
  const double left = std::nextafter(-1.0, -2.0);
  CHECK(f2.value({-1.0}) == 1.0);
  CHECK(f2.value({left}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f2.gradient({-1.0})[0] == -2.0);
  CHECK(f2.gradient({left})[0] == doctest::Approx(-2.0).epsilon(1e-12));

  const Problem f5 = make_zoo_problem(ZooTag::F5_PIECEWISE);
  const double below = std::nextafter(0.0, -1.0);
  CHECK(f5.value({0.0}) == 0.0);
  CHECK(f5.value({below}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f5.gradient({0.0})[0] == 0.0);
  CHECK(f5.gradient({below})[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("finite difference oracle on pinned derivatives") {
  const Problem f1 = make_zoo_problem(ZooTag::F1_SQUARE);
  CHECK(std::abs(finite_difference_gradient(f1, {3.0}, 1e-6)[0] - 6.0) <= 1e-6);

  const Problem f3 = make_zoo_problem(ZooTag::F3_DOUBLE_WELL);
  CHECK(std::abs(finite_difference_gradient(f3, {0.5}, 1e-6)[0] - (-0.75)) <= 1e-6);

  // left branch of f5 at -2: derivative -2/sqrt(2)
  const Problem f5 = make_zoo_problem(ZooTag::F5_PIECEWISE);
  const double expect = -2.0 / std::sqrt(2.0);
  CHECK(std::abs(finite_difference_gradient(f5, {-2.0}, 1e-6)[0] - expect) <= 1e-5);

  CHECK_THROWS_AS(finite_difference_gradient(f1, {1.0}, 0.0), Error);
}

TEST_CASE("quadratic family") {
  const Problem iso = make_quadratic_problem(1, 2.0, 2.0, {0.0});
  CHECK(iso.value({1.0}) == 1.0);

  const Problem aniso = make_quadratic_problem(2, 1.0, 4.0, {0.0, 0.0});
  const Vec g = aniso.gradient({1.0, 1.0});
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 4.0);
  CHECK(*aniso.known_smoothness_L == 4.0);

  const Problem shifted = make_quadratic_problem(1, 2.0, 2.0, {3.0});
  CHECK(*shifted.known_fstar == 0.0);
  CHECK(shifted.value({3.0}) == 0.0);

  CHECK_THROWS_AS(make_quadratic_problem(2, 4.0, 1.0, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(make_quadratic_problem(1, 1.0, 4.0, {0.0}), Error);

  // mu and L are both attained on the diagonal
  const Problem p5 = make_quadratic_problem(5, 0.5, 3.0, Vec(5, 0.0));
  Vec probe(5, 0.0);
  probe[0] = 1.0;
  CHECK(p5.gradient(probe)[0] == 0.5);
  probe[0] = 0.0;
  probe[4] = 1.0;
  CHECK(p5.gradient(probe)[4] == 3.0);
}

TEST_CASE("halfspace dataset generation") {
  const HalfSpaceDataset ds = generate_halfspace_dataset(7, 40, 4, 4.0, 2.0, 1e-5);
  REQUIRE(ds.size() == 40);
  REQUIRE(ds.dimension() == 4);
  std::size_t positives = 0;
  for (int label : ds.labels) positives += label == 1 ? 1 : 0;
  CHECK(positives == 20);

  const HalfSpaceDataset again = generate_halfspace_dataset(7, 40, 4, 4.0, 2.0, 1e-5);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(ds.labels[i] == again.labels[i]);
    for (std::size_t j = 0; j < ds.dimension(); ++j) {
      CHECK(ds.features[i][j] == again.features[i][j]);
    }
  }
  const HalfSpaceDataset other = generate_halfspace_dataset(8, 40, 4, 4.0, 2.0, 1e-5);
  bool differs = false;
  for (std::size_t j = 0; j < 4; ++j) {
    differs = differs || other.features[0][j] != ds.features[0][j];
  }
  CHECK(differs);

  // empirical class means stay within three standard errors per coordinate
  const double band = 3.0 * std::sqrt(2.0 / 20.0);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 20; ++i) mean += ds.features[i][j];
    mean /= 20.0;
    CHECK(std::abs(mean - ds.mean_pos[j]) <= band);
  }

  CHECK_THROWS_AS(generate_halfspace_dataset(7, 41, 4, 4.0, 2.0, 1e-5), Error);
  CHECK_THROWS_AS(generate_halfspace_dataset(7, 0, 4, 4.0, 2.0, 1e-5), Error);
}

TEST_CASE("halfspace problem evaluation") {
  const HalfSpaceDataset ds = generate_halfspace_dataset(7, 40, 4, 4.0, 2.0, 1e-5);
  const Problem p = make_halfspace_problem(ds);
  REQUIRE(p.sample_count == 40);

  const Vec zero(4, 0.0);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(p.sample_value(i, zero) == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK(p.value(zero) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.known_sample_lower_bounds.size() == 40);

  // full value is the sample mean to 1e-12 relative
  CounterRng rng(99, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(4);
    for (double& v : x) v = uniform_in(rng, -2.0, 2.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < p.sample_count; ++i) mean += p.sample_value(i, x);
    mean /= static_cast<double>(p.sample_count);
    CHECK(std::abs(p.value(x) - mean) <= 1e-12 * std::max(1.0, std::abs(mean)));
  }
}

TEST_CASE("halfspace gradients match finite differences") {
  const HalfSpaceDataset ds = generate_halfspace_dataset(7, 40, 4, 4.0, 2.0, 1e-5);
  const Problem p = make_halfspace_problem(ds);
  CounterRng rng(5, 17);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(4);
    for (double& v : x) v = uniform_in(rng, -2.0, 2.0);
    const std::size_t i = static_cast<std::size_t>(rng.next_below(40));
    const double h = 1e-6 * (1.0 + std::sqrt(norm_sq(x)));

    Problem single = p;
    single.value = [&p, i](const Vec& y) { return p.sample_value(i, y); };
    const Vec fd = finite_difference_gradient(single, x, h);
    const Vec g = p.sample_gradient(i, x);
    double err = 0.0;
    for (std::size_t j = 0; j < 4; ++j) err += (fd[j] - g[j]) * (fd[j] - g[j]);
    CHECK(std::sqrt(err) <= 1e-6 * (1.0 + std::sqrt(norm_sq(g))));
  }
}

TEST_CASE("halfspace smoothness bound dominates sampled curvature") {
  const HalfSpaceDataset ds = generate_halfspace_dataset(7, 40, 4, 4.0, 2.0, 1e-5);
  const Problem p = make_halfspace_problem(ds);
  const double L = halfspace_smoothness_bound(ds);
  CHECK(L > 0.0);
  // gradient difference quotient never exceeds L
  CounterRng rng(31, 1);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x(4), y(4);
    for (double& v : x) v = uniform_in(rng, -2.0, 2.0);
    for (double& v : y) v = uniform_in(rng, -2.0, 2.0);
    const std::size_t i = static_cast<std::size_t>(rng.next_below(40));
    const Vec gx = p.sample_gradient(i, x);
    const Vec gy = p.sample_gradient(i, y);
    const double dg = std::sqrt(norm_sq(sub(gx, gy)));
    const double dx = std::sqrt(norm_sq(sub(x, y)));
    if (dx > 1e-9) CHECK(dg / dx <= L * (1.0 + 1e-9));
  }
}

TEST_CASE("halfspace csv round trip") {
  const HalfSpaceDataset ds = generate_halfspace_dataset(7, 40, 4, 4.0, 2.0, 1e-5);
  const std::string path = "test_dataset_roundtrip.csv";
  write_halfspace_csv(ds, path);
  const HalfSpaceDataset back = read_halfspace_csv(path);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.labels[i] == ds.labels[i]);
    for (std::size_t j = 0; j < ds.dimension(); ++j) {
      CHECK(back.features[i][j] == ds.features[i][j]);  // bit-exact
    }
  }
  std::remove(path.c_str());
}

}  // TEST_SUITE
