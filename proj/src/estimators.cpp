#include "nnentropy/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"

namespace nnentropy {

double r_statistic(const NeighborResult& neighbors, std::size_t k) {
  double sum = 0.0;
  for (std::size_t j = 0; j < neighbors.count(); ++j) sum += neighbors.at(j, k);
  return sum / static_cast<double>(neighbors.count());
}

double r_statistic(const Sample& sample, std::size_t k, const LambdaFamily& family,
                   std::size_t threads) {
  const std::array<std::size_t, 1> orders{k};
  return r_statistic(kmax_alpha_trie(sample, orders, family, threads), k);
}

EstimateReport eta_estimator(const Sample& sample, std::size_t k, const LambdaFamily& family,
                             std::size_t threads) {
  if (k < 1) throw InvalidInput("order k must be >= 1");
  if (k + 1 > sample.n()) {
    throw InsufficientNeighbors(fmt::format(
        "eta with k={} needs at least {} points, sample has {}", k, k + 2, sample.count()));
  }
  const std::array<std::size_t, 2> orders{k, k + 1};
  const auto nb = kmax_alpha_trie(sample, orders, family, threads);
  EstimateReport rep;
  rep.r_k = r_statistic(nb, k);
  rep.r_k_plus_1 = r_statistic(nb, k + 1);
  rep.eta = static_cast<double>(k) * (rep.r_k - rep.r_k_plus_1);
  rep.n = sample.n();
  rep.k = k;
  rep.m = sample.depth();
  rep.family = family.descriptor();
  return rep;
}

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t s = n; s >= 1; --s) h += 1.0 / static_cast<double>(s);
  return h;
}

double expected_r_symmetric(std::size_t n, std::size_t k, std::size_t alphabet_size) {
  if (k < 1 || k > n) throw InvalidInput(fmt::format("need 1 <= k <= n, got k={} n={}", k, n));
  if (alphabet_size < 2) throw InvalidInput("alphabet size must be >= 2");
  return (harmonic(n) - harmonic(k - 1)) / std::log(static_cast<double>(alphabet_size));
}

double variance_bound(std::size_t n, std::size_t k, std::size_t m) {
  if (n < 1 || k < 1 || m < 1) throw InvalidInput("variance bound needs n, k, m >= 1");
  const double md = static_cast<double>(m);
  const double km1 = static_cast<double>(k) * md + 1.0;
  return md * md * km1 * km1 / (4.0 * static_cast<double>(n + 1));
}

double mcdiarmid_tail(std::size_t n, std::size_t k, std::size_t m, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("delta must be > 0");
  const double md = static_cast<double>(m);
  const double km1 = static_cast<double>(k) * md + 1.0;
  const double exponent = -2.0 * static_cast<double>(n + 1) * delta * delta / (md * md * km1 * km1);
  return std::min(1.0, 2.0 * std::exp(exponent));
}

std::size_t truncation_depth(std::size_t n, double a, double safety) {
  if (n < 2) throw InvalidInput("truncation depth needs n >= 2");
  if (!(a > 0.0)) {
    throw InvalidInput("decay rate a must be > 0 (source has a probability-one transition)");
  }
  if (!(safety >= 1.0)) throw InvalidInput("safety factor must be >= 1");
  return static_cast<std::size_t>(std::ceil(safety * std::log(static_cast<double>(n)) / a));
}

std::size_t auto_order(std::size_t n) {
  if (n < 1) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::log(static_cast<double>(n)))));
}

}  // namespace nnentropy
