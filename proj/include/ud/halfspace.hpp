#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ud/problem.hpp"

namespace ud {

// Binary classification with a sigmoid loss on two Gaussian clouds:
//   f(x) = (1/n) sum_i sigmoid(-b_i x^T a_i) + (lambda/2) ||x||^2.
// Labels are stored as {-1, +1}; samples 0..n/2-1 carry +1, the rest -1.
struct HalfSpaceDataset {
  std::vector<Vec> features;  // n points of dimension d
  std::vector<int> labels;    // +1 or -1, n/2 each
  std::uint64_t seed = 0;
  Vec mean_pos;  // class mean of the +1 cloud
  Vec mean_neg;  // class mean of the -1 cloud
  double variance = 2.0;
  double reg_lambda = 1e-5;

  std::size_t size() const { return features.size(); }
  std::size_t dimension() const { return features.empty() ? 0 : features[0].size(); }
};

// Class means sit at +/-(mean_separation/2) * (1,..,1)/sqrt(d). Features are
// drawn from CounterRng(seed, stream=0x487346) in sample-major, coordinate-
// minor order, so the same seed regenerates bit-identical data.
HalfSpaceDataset generate_halfspace_dataset(std::uint64_t seed, std::size_t n,
                                            std::size_t d,
                                            double mean_separation,
                                            double variance,
                                            double reg_lambda);

Problem make_halfspace_problem(HalfSpaceDataset dataset);

// Upper bound on the smoothness constant of every sample loss, from
// sup|sigmoid''| * max_i ||a_i||^2 + lambda.
double halfspace_smoothness_bound(const HalfSpaceDataset& dataset);

double sigmoid(double t);

// CSV round-trip with header idx,label,a_1,...,a_d at 17 significant digits.
void write_halfspace_csv(const HalfSpaceDataset& dataset, const std::string& path);
HalfSpaceDataset read_halfspace_csv(const std::string& path);

}  // namespace ud
