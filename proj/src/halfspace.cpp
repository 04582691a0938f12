#include "ud/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include "ud/error.hpp"
#include "ud/rng.hpp"

namespace ud {

namespace {

constexpr std::uint64_t kDatasetStream = 0x487346;  // dataset draws

}  // namespace

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

HalfSpaceDataset generate_halfspace_dataset(std::uint64_t seed, std::size_t n,
                                            std::size_t d,
                                            double mean_separation,
                                            double variance,
                                            double reg_lambda) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::CONFIG, "halfspace dataset needs even n >= 2");
  }
  if (d < 1) throw Error(ErrorCode::CONFIG, "halfspace dataset needs d >= 1");
  if (!(variance > 0.0)) throw Error(ErrorCode::CONFIG, "variance must be positive");
  if (reg_lambda < 0.0) throw Error(ErrorCode::CONFIG, "reg_lambda must be >= 0");

  HalfSpaceDataset ds;
  ds.seed = seed;
  ds.variance = variance;
  ds.reg_lambda = reg_lambda;

  const double half = 0.5 * mean_separation / std::sqrt(static_cast<double>(d));
  ds.mean_pos.assign(d, half);
  ds.mean_neg.assign(d, -half);

  const double sigma = std::sqrt(variance);
  CounterRng rng(seed, kDatasetStream);
  ds.features.resize(n);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i < n / 2;
    const Vec& mean = positive ? ds.mean_pos : ds.mean_neg;
    ds.labels[i] = positive ? 1 : -1;
    ds.features[i].resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      ds.features[i][j] = mean[j] + sigma * rng.next_normal();
    }
  }
  return ds;
}

Problem make_halfspace_problem(HalfSpaceDataset dataset) {
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dimension();
  if (n == 0) throw Error(ErrorCode::CONFIG, "halfspace dataset is empty");

  auto ds = std::make_shared<const HalfSpaceDataset>(std::move(dataset));

  auto sample_value = [ds](std::size_t i, const Vec& x) {
    const double t = -static_cast<double>(ds->labels[i]) * dot(x, ds->features[i]);
    return sigmoid(t) + 0.5 * ds->reg_lambda * norm_sq(x);
  };
  auto sample_gradient = [ds](std::size_t i, const Vec& x) {
    const double b = static_cast<double>(ds->labels[i]);
    const Vec& a = ds->features[i];
    const double s = sigmoid(-b * dot(x, a));
    const double coef = -b * s * (1.0 - s);
    Vec g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      g[j] = coef * a[j] + ds->reg_lambda * x[j];
    }
    return g;
  };

  Problem p;
  p.name = "halfspace";
  p.dimension = d;
  p.sample_count = n;
  p.sample_value = sample_value;
  p.sample_gradient = sample_gradient;
  // The full objective accumulates samples in id order and scales once, the
  // exact operation sequence of batch_eval over the full range, so GD and
  // full-batch SGD agree bitwise.
  p.value = [sample_value, n](const Vec& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += sample_value(i, x);
    return acc * (1.0 / static_cast<double>(n));
  };
  p.gradient = [sample_gradient, n](const Vec& x) {
    Vec g(x.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec gi = sample_gradient(i, x);
      for (std::size_t j = 0; j < x.size(); ++j) g[j] += gi[j];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& v : g) v *= inv;
    return g;
  };
  p.known_sample_lower_bounds.assign(n, 0.0);
  return p;
}

double halfspace_smoothness_bound(const HalfSpaceDataset& dataset) {
  // sup_t |sigmoid''(t)| = 1/(6*sqrt(3))
  const double curv = 1.0 / (6.0 * std::sqrt(3.0));
  double max_nsq = 0.0;
  for (const Vec& a : dataset.features) {
    max_nsq = std::max(max_nsq, norm_sq(a));
  }
  return curv * max_nsq + dataset.reg_lambda;
}

void write_halfspace_csv(const HalfSpaceDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IO, "cannot open " + path);
  out << "idx,label";
  for (std::size_t j = 0; j < dataset.dimension(); ++j) out << ",a_" << (j + 1);
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << i << "," << dataset.labels[i];
    for (double v : dataset.features[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    out << "\n";
  }
}

HalfSpaceDataset read_halfspace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IO, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IO, "empty csv: " + path);
  HalfSpaceDataset ds;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw Error(ErrorCode::IO, "bad csv row: " + line);
    ds.labels.push_back(std::stoi(cells[1]));
    Vec a;
    for (std::size_t j = 2; j < cells.size(); ++j) a.push_back(std::stod(cells[j]));
    ds.features.push_back(std::move(a));
  }
  return ds;
}

}  // namespace ud
