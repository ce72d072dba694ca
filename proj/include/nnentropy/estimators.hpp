#pragma once

#include <cstddef>
#include <string>

#include "nnentropy/neighbors.hpp"
#include "nnentropy/sequence.hpp"
#include "nnentropy/weak_metric.hpp"

namespace nnentropy {

// Throughout, n is the number of neighbors of each point: a sample of n + 1
// points. Functions taking a Sample derive n from it.

struct EstimateReport {
  double r_k = 0.0;
  double r_k_plus_1 = 0.0;
  double eta = 0.0;  // estimate of 1/h
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::string family;
};

// Average over points of the k-th largest alpha to the other points.
double r_statistic(const Sample& sample, std::size_t k, const LambdaFamily& family,
                   std::size_t threads = 1);

// Same average read from precomputed neighbor values; summed in point order.
double r_statistic(const NeighborResult& neighbors, std::size_t k);

// eta = k (r_k - r_{k+1}); needs k + 1 <= n.
EstimateReport eta_estimator(const Sample& sample, std::size_t k, const LambdaFamily& family,
                             std::size_t threads = 1);

// H_n = sum_{s=1..n} 1/s, H_0 = 0.
double harmonic(std::size_t n);

// E r for the uniform source on |A| symbols with beta = 1/|A| and untruncated
// metric: (H_n - H_{k-1}) / log|A|.
double expected_r_symmetric(std::size_t n, std::size_t k, std::size_t alphabet_size);

// Var r <= m^2 (k m + 1)^2 / (4 (n + 1)).
double variance_bound(std::size_t n, std::size_t k, std::size_t m);

// P{|r - E r| > delta} <= min(1, 2 exp(-2 (n + 1) delta^2 / (m^2 (k m + 1)^2))).
double mcdiarmid_tail(std::size_t n, std::size_t k, std::size_t m, double delta);

// ceil(safety * log(n) / a): depth past which truncation changes E r by O(1/n)
// for sources with mu(C_n(x)) <= b e^{-a n}.
std::size_t truncation_depth(std::size_t n, double a, double safety = 2.0);

// max(1, round(log n)).
std::size_t auto_order(std::size_t n);

}  // namespace nnentropy
