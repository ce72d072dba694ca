#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nnentropy/sequence.hpp"
#include "nnentropy/weak_metric.hpp"

namespace nnentropy {

// For every point j and every requested order k, the k-th largest of
// alpha^(m)(x_i, x_j) over i != j (ties kept, so the value is well defined).
class NeighborResult {
 public:
  NeighborResult(std::vector<std::size_t> orders, std::size_t count);

  const std::vector<std::size_t>& orders() const noexcept { return orders_; }
  std::size_t count() const noexcept { return count_; }

  // Values of point j, one per order in orders().
  std::span<double> point(std::size_t j) noexcept {
    return std::span<double>(values_).subspan(j * orders_.size(), orders_.size());
  }
  std::span<const double> point(std::size_t j) const noexcept {
    return std::span<const double>(values_).subspan(j * orders_.size(), orders_.size());
  }
  // Value for point j at order k; k must be one of orders().
  double at(std::size_t j, std::size_t k) const;

  friend bool operator==(const NeighborResult&, const NeighborResult&) = default;

 private:
  std::size_t index_of(std::size_t k) const;

  std::vector<std::size_t> orders_;
  std::size_t count_;
  std::vector<double> values_;
};

// Reference implementation: all n alphas, sorted descending. O(n m).
std::vector<double> kmax_alpha_naive(const Sample& sample, std::size_t j,
                                     std::span<const std::size_t> orders,
                                     const LambdaFamily& family);

// Compacted prefix trie over the sample points. Each node covers a contiguous
// run of the lexicographically sorted points that share a prefix of length
// depth(); leaves hold groups of identical points (depth == m).
class PrefixTrie {
 public:
  struct Node {
    std::uint32_t lo;
    std::uint32_t hi;
    std::uint32_t depth;
    std::int32_t parent;  // -1 for the root
  };

  explicit PrefixTrie(const Sample& sample);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  // Sample indices in lexicographic order.
  const std::vector<std::uint32_t>& sorted() const noexcept { return sorted_; }
  std::int32_t leaf_of(std::size_t j) const noexcept { return leaf_of_[j]; }

 private:
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> sorted_;
  std::vector<std::int32_t> leaf_of_;
};

// Same values as kmax_alpha_naive for every j. Candidates are visited by
// decreasing shared-prefix length p - 1 (walking up from j's leaf); since
// p - 1 <= alpha <= p, the walk stops once the current k-th best alpha reaches
// the upper bound of everything left. The zero family reads values straight
// off subtree sizes. threads == 0 uses all hardware threads.
NeighborResult kmax_alpha_trie(const Sample& sample, std::span<const std::size_t> orders,
                               const LambdaFamily& family, std::size_t threads = 1);

// Naive oracle applied to every point; for tests and validation.
NeighborResult kmax_alpha_naive_all(const Sample& sample, std::span<const std::size_t> orders,
                                    const LambdaFamily& family);

}  // namespace nnentropy
