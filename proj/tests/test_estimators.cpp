#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "nnentropy/errors.hpp"
#include "nnentropy/estimators.hpp"
#include "nnentropy/rng.hpp"
#include "nnentropy/sources.hpp"

using namespace nnentropy;

namespace {

const Alphabet kBinary(2);

Sample tiny_sample() {
  return Sample({SymbolSequence({0, 0, 0}, kBinary), SymbolSequence({0, 0, 1}, kBinary),
                 SymbolSequence({1, 1, 1}, kBinary)},
                kBinary);
}

// Monte Carlo mean of the k-th largest of n alpha values between one fixed
// random point and n fresh ones (uniform binary, beta = 1/2). Under the
// closed form each alpha is exponential with rate log 2.
double mc_kth_alpha(std::size_t n, std::size_t k, std::size_t reps, double* se) {
  const auto fam = LambdaFamily::beta(0.5);
  const std::size_t m = 60;
  std::vector<Symbol> x(m), y(m);
  double sum = 0.0, sq = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    std::vector<double> vals;
    for (std::size_t i = 0; i <= n; ++i) {
      auto& dst = i == 0 ? x : y;
      for (std::size_t j = 0; j < m; ++j) dst[j] = static_cast<Symbol>(rng::at(r * 131 + i, j) >> 63);
      if (i > 0) vals.push_back(alpha(x, y, fam));
    }
    std::nth_element(vals.begin(), vals.begin() + static_cast<long>(k - 1), vals.end(), std::greater<>());
    const double v = vals[k - 1];
    sum += v;
    sq += v * v;
  }
  const double mean = sum / static_cast<double>(reps);
  *se = std::sqrt((sq / static_cast<double>(reps) - mean * mean) / static_cast<double>(reps));
  return mean;
}

}  // namespace

TEST(RStatistic, WorkedExamples) {
  const auto s = tiny_sample();
  EXPECT_NEAR(r_statistic(s, 1, LambdaFamily::zero()), 4.0 / 3.0, 1e-15);
  EXPECT_EQ(r_statistic(s, 2, LambdaFamily::zero()), 0.0);
  EXPECT_THROW(r_statistic(s, 3, LambdaFamily::zero()), InsufficientNeighbors);
}

TEST(RStatistic, IdenticalPointsGiveDepth) {
  const SymbolSequence p({0, 1, 1, 0}, kBinary);
  const Sample s(std::vector<SymbolSequence>(5, p), kBinary);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(r_statistic(s, k, LambdaFamily::beta(0.4)), 4.0);
}

TEST(RStatistic, PermutationInvariantAndBounded) {
  const auto s = sample(BernoulliSource({0.6, 0.4}), 100, 24, Seed{3});
  std::vector<std::size_t> order(100);
  for (std::size_t i = 0; i < 100; ++i) order[i] = (i * 37) % 100;
  const auto fam = LambdaFamily::beta(0.5);
  const double a = r_statistic(s, 2, fam);
  EXPECT_NEAR(r_statistic(s.permuted(order), 2, fam), a, 1e-12);
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 24.0);
}

TEST(EtaEstimator, WorkedExamples) {
  const auto rep = eta_estimator(tiny_sample(), 1, LambdaFamily::zero());
  EXPECT_NEAR(rep.eta, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(rep.n, 2u);
  EXPECT_EQ(rep.k, 1u);
  EXPECT_EQ(rep.m, 3u);
  EXPECT_EQ(rep.family, "zero");
  EXPECT_THROW(eta_estimator(tiny_sample(), 2, LambdaFamily::zero()), InsufficientNeighbors);

  const SymbolSequence p({1, 1, 0}, kBinary);
  const Sample same(std::vector<SymbolSequence>(4, p), kBinary);
  EXPECT_EQ(eta_estimator(same, 2, LambdaFamily::beta(0.5)).eta, 0.0);
}

TEST(EtaEstimator, NonnegativeAndBounded) {
  for (std::uint64_t c = 0; c < 20; ++c) {
    const auto s = sample(BernoulliSource({0.5, 0.3, 0.2}), 30 + c, 10, Seed{c});
    const auto rep = eta_estimator(s, 1 + c % 4, LambdaFamily::beta(0.2 + 0.03 * static_cast<double>(c)));
    EXPECT_GE(rep.eta, 0.0);
    EXPECT_LE(rep.eta, static_cast<double>(rep.k * rep.m));
    EXPECT_LE(rep.r_k_plus_1, rep.r_k);
  }
}

TEST(Harmonic, WorkedExamples) {
  EXPECT_EQ(harmonic(0), 0.0);
  EXPECT_NEAR(harmonic(3), 11.0 / 6.0, 1e-15);
  EXPECT_NEAR(harmonic(5), 137.0 / 60.0, 1e-15);
}

TEST(ExpectedRSymmetric, WorkedExamples) {
  EXPECT_NEAR(expected_r_symmetric(1, 1, 2), 1.4426950408889634, 1e-15);
  EXPECT_NEAR(expected_r_symmetric(3, 1, 2), 2.644940908296433, 1e-14);
  for (std::size_t n : {1u, 7u, 100u}) {
    EXPECT_NEAR(expected_r_symmetric(n, n, 3), 1.0 / (static_cast<double>(n) * std::log(3.0)), 1e-13);
  }
  EXPECT_THROW(expected_r_symmetric(2, 3, 2), InvalidInput);
}

TEST(ExpectedRSymmetric, MatchesExponentialAlphaMonteCarlo) {
  double se = 0.0;
  const double m1 = mc_kth_alpha(1, 1, 40000, &se);
  EXPECT_NEAR(m1, expected_r_symmetric(1, 1, 2), 4 * se);
  const double m3 = mc_kth_alpha(3, 1, 20000, &se);
  EXPECT_NEAR(m3, expected_r_symmetric(3, 1, 2), 4 * se);
  const double m5 = mc_kth_alpha(5, 3, 20000, &se);
  EXPECT_NEAR(m5, expected_r_symmetric(5, 3, 2), 4 * se);
}

TEST(VarianceBound, WorkedExamples) {
  EXPECT_DOUBLE_EQ(variance_bound(99, 2, 10), 110.25);
  EXPECT_DOUBLE_EQ(variance_bound(3, 1, 1), 0.25);
  EXPECT_GT(variance_bound(1000, 5, 30), 0.0);
}

TEST(McdiarmidTail, WorkedExamples) {
  EXPECT_EQ(mcdiarmid_tail(99, 1, 1, 1e-9), 1.0);
  EXPECT_NEAR(mcdiarmid_tail(99, 1, 1, 1.0), 3.8574996959278356e-22, 1e-35);
  const double e1 = std::log(mcdiarmid_tail(99, 2, 3, 2.0) / 2.0);
  const double e2 = std::log(mcdiarmid_tail(99, 2, 3, 4.0) / 2.0);
  EXPECT_NEAR(e2 / e1, 4.0, 1e-12);
  EXPECT_THROW(mcdiarmid_tail(9, 1, 1, 0.0), InvalidInput);
}

TEST(TruncationDepth, WorkedExamples) {
  const auto n = static_cast<std::size_t>(std::exp(10.0));
  EXPECT_EQ(n, 22026u);
  EXPECT_EQ(truncation_depth(n, std::log(2.0), 2.0), 29u);
  EXPECT_EQ(truncation_depth(2, 1.0, 1.0), 1u);
  const auto m1 = truncation_depth(1000, 0.3, 2.0);
  const auto m2 = truncation_depth(1000, 0.3, 4.0);
  EXPECT_LE(m2, 2 * m1);
  EXPECT_GE(m2 + 1, 2 * m1);
  EXPECT_THROW(truncation_depth(100, 0.0), InvalidInput);
}

TEST(AutoOrder, RoundsLogN) {
  EXPECT_EQ(auto_order(1), 1u);
  EXPECT_EQ(auto_order(511), 6u);
  EXPECT_EQ(auto_order(4096), 8u);
}
