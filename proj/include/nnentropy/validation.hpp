#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "nnentropy/rng.hpp"

namespace nnentropy {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Trie accelerator vs naive oracle on `samples` random samples with
// |A| in {2,3,4}, n+1 in [4,128], m in [4,64] and families zero, beta(0.3),
// beta(0.5), beta(0.9). Exact equality required.
CheckResult check_oracle_equivalence(std::size_t samples, Seed seed);

// On `pairs` random pairs per family: p-1 <= alpha <= p, symmetry, monotone
// in truncation depth, exact one-step extension rules; lambda(0) = 0,
// nondecreasing and <= 1 on a grid of `grid_points` values.
CheckResult check_metric_properties(std::size_t pairs, std::size_t grid_points, Seed seed);

// max over t in {0.1, 0.2, ..., 10} of
// |beta F(t-1) + (1-beta) F(lambda^{-1}(t)) - F(t)| with F(t) = beta^t
// (F = 1 for t <= 0, F(inf) = 0) must be <= 1e-10.
CheckResult check_beta_fixed_point(double beta);

// Small worked examples for every operation plus the checks above at reduced
// size. Prints one line per check; returns true when all pass.
bool run_validation(std::ostream& out, Seed seed);

}  // namespace nnentropy
