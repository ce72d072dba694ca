#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "nnentropy/rng.hpp"
#include "nnentropy/sequence.hpp"

namespace nnentropy {

// I.i.d. product measure over the alphabet.
class BernoulliSource {
 public:
  explicit BernoulliSource(std::vector<double> probs);
  static BernoulliSource uniform(std::size_t alphabet_size);

  const std::vector<double>& probs() const noexcept { return probs_; }
  Alphabet alphabet() const { return Alphabet(probs_.size()); }
  bool is_uniform() const noexcept;

 private:
  std::vector<double> probs_;
};

// Stationary-start (by default) Markov chain over the alphabet.
class MarkovSource {
 public:
  // Without an explicit start the chain must be irreducible; its stationary
  // distribution becomes the start. With an explicit start any row-stochastic
  // matrix is accepted (reducible chains can still be sampled).
  explicit MarkovSource(std::vector<std::vector<double>> transition,
                        std::optional<std::vector<double>> start = std::nullopt);

  const std::vector<std::vector<double>>& transition() const noexcept { return transition_; }
  const std::vector<double>& start() const noexcept { return start_; }
  Alphabet alphabet() const { return Alphabet(transition_.size()); }
  std::size_t states() const noexcept { return transition_.size(); }
  bool irreducible() const;

 private:
  std::vector<std::vector<double>> transition_;
  std::vector<double> start_;
};

using Source = std::variant<BernoulliSource, MarkovSource>;

// pi with pi P = pi, sum pi = 1. Throws InvalidInput for reducible chains.
std::vector<double> stationary_distribution(const MarkovSource& source);

// Entropy rate in nats per symbol. Throws InvalidInput for reducible chains.
double true_entropy(const Source& source);

// a = -log(largest elementary probability): the per-symbol decay rate in
// mu(C_n(x)) <= b e^{-a n}. Zero when some probability equals 1.
double decay_rate(const Source& source);

Alphabet source_alphabet(const Source& source);

// count independent sequences of length depth. Point i draws symbol s from
// uniform(point_seed(seed, i).master, s), so earlier points do not depend on
// count and the result is bit-identical across runs.
Sample sample(const Source& source, std::size_t count, std::size_t depth, Seed seed);

}  // namespace nnentropy
