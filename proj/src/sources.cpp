#include "nnentropy/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "nnentropy/errors.hpp"

namespace nnentropy {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_distribution(const std::vector<double>& p, const std::string& what) {
  if (p.size() < 2 || p.size() > Alphabet::kMaxSize) {
    throw InvalidInput(fmt::format("{}: needs between 2 and 256 entries, got {}", what, p.size()));
  }
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput(what + ": entries must be >= 0");
  }
  double s = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(s - 1.0) > kSumTolerance) {
    throw InvalidInput(fmt::format("{}: entries sum to {:.17g}, not 1", what, s));
  }
}

// Inverse-CDF draw; never returns a zero-probability symbol.
Symbol draw(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return static_cast<Symbol>(i);
  }
  return static_cast<Symbol>(last);
}

double plogp_sum(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace

BernoulliSource::BernoulliSource(std::vector<double> probs) : probs_(std::move(probs)) {
  check_distribution(probs_, "bernoulli probabilities");
}

BernoulliSource BernoulliSource::uniform(std::size_t alphabet_size) {
  if (alphabet_size < 2 || alphabet_size > Alphabet::kMaxSize) {
    throw InvalidInput("uniform source alphabet size must be in [2, 256]");
  }
  return BernoulliSource(std::vector<double>(alphabet_size, 1.0 / static_cast<double>(alphabet_size)));
}

bool BernoulliSource::is_uniform() const noexcept {
  return std::all_of(probs_.begin(), probs_.end(), [&](double p) { return p == probs_.front(); });
}

MarkovSource::MarkovSource(std::vector<std::vector<double>> transition,
                           std::optional<std::vector<double>> start)
    : transition_(std::move(transition)) {
  const std::size_t k = transition_.size();
  if (k < 2 || k > Alphabet::kMaxSize) {
    throw InvalidInput("markov chain needs between 2 and 256 states");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (transition_[i].size() != k) {
      throw InvalidInput(fmt::format("transition row {} has {} entries, expected {}", i,
                                     transition_[i].size(), k));
    }
    check_distribution(transition_[i], fmt::format("transition row {}", i));
  }
  if (start) {
    if (start->size() != k) throw InvalidInput("start distribution size != state count");
    check_distribution(*start, "start distribution");
    start_ = std::move(*start);
  } else {
    start_ = stationary_distribution(*this);
  }
}

bool MarkovSource::irreducible() const {
  const std::size_t k = transition_.size();
  // Strongly connected iff every state reaches all states.
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<char> seen(k, 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < k; ++v) {
        if (transition_[u][v] > 0.0 && !seen[v]) {
          seen[v] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    if (reached != k) return false;
  }
  return true;
}

std::vector<double> stationary_distribution(const MarkovSource& source) {
  if (!source.irreducible()) {
    throw InvalidInput("markov chain is reducible; no unique stationary distribution");
  }
  const auto& p = source.transition();
  const auto k = static_cast<Eigen::Index>(p.size());
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      a(i, j) = p[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(k - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);

  std::vector<double> out(static_cast<std::size_t>(k));
  double total = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    out[static_cast<std::size_t>(i)] = std::max(0.0, pi(i));
    total += out[static_cast<std::size_t>(i)];
  }
  for (double& v : out) v /= total;
  return out;
}

double true_entropy(const Source& source) {
  if (const auto* b = std::get_if<BernoulliSource>(&source)) return plogp_sum(b->probs());
  const auto& m = std::get<MarkovSource>(source);
  auto pi = stationary_distribution(m);
  double h = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) h += pi[i] * plogp_sum(m.transition()[i]);
  return h;
}

double decay_rate(const Source& source) {
  double pmax = 0.0;
  if (const auto* b = std::get_if<BernoulliSource>(&source)) {
    pmax = *std::max_element(b->probs().begin(), b->probs().end());
  } else {
    for (const auto& row : std::get<MarkovSource>(source).transition()) {
      pmax = std::max(pmax, *std::max_element(row.begin(), row.end()));
    }
  }
  return pmax >= 1.0 ? 0.0 : -std::log(pmax);
}

Alphabet source_alphabet(const Source& source) {
  return std::visit([](const auto& s) { return s.alphabet(); }, source);
}

Sample sample(const Source& source, std::size_t count, std::size_t depth, Seed seed) {
  if (count < 2) throw InvalidInput("sample count must be >= 2");
  if (depth < 1) throw InvalidInput("sample depth must be >= 1");
  std::vector<Symbol> flat(count * depth);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t key = point_seed(seed, i).master;
    Symbol* out = flat.data() + i * depth;
    if (const auto* b = std::get_if<BernoulliSource>(&source)) {
      for (std::size_t s = 0; s < depth; ++s) out[s] = draw(b->probs(), rng::uniform(key, s));
    } else {
      const auto& m = std::get<MarkovSource>(source);
      out[0] = draw(m.start(), rng::uniform(key, 0));
      for (std::size_t s = 1; s < depth; ++s) {
        out[s] = draw(m.transition()[out[s - 1]], rng::uniform(key, s));
      }
    }
  }
  return Sample(std::move(flat), count, depth, source_alphabet(source));
}

}  // namespace nnentropy
