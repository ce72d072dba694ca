#include "nnentropy/neighbors.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"
#include "nnentropy/parallel.hpp"

namespace nnentropy {
namespace {

std::size_t check_orders(const Sample& sample, std::span<const std::size_t> orders) {
  if (orders.empty()) throw InvalidInput("at least one order k is required");
  std::size_t kmax = 0;
  for (std::size_t k : orders) {
    if (k < 1) throw InvalidInput("order k must be >= 1");
    if (k > sample.n()) {
      throw InsufficientNeighbors(
          fmt::format("order k={} exceeds the {} neighbors available", k, sample.n()));
    }
    kmax = std::max(kmax, k);
  }
  return kmax;
}

std::size_t common_prefix(SymbolView a, SymbolView b) {
  return static_cast<std::size_t>(std::mismatch(a.begin(), a.end(), b.begin()).first - a.begin());
}

// Descending top-K buffer of alpha values.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { v_.reserve(k + 1); }

  bool full() const noexcept { return v_.size() == k_; }
  double kth() const noexcept { return v_.back(); }

  void push(double a) {
    if (full() && a <= v_.back()) return;
    v_.insert(std::upper_bound(v_.begin(), v_.end(), a, std::greater<>()), a);
    if (v_.size() > k_) v_.pop_back();
  }
  void push_n(double a, std::size_t times) {
    for (std::size_t i = 0; i < times && !(full() && a <= v_.back()); ++i) push(a);
  }
  double order(std::size_t k) const noexcept { return v_[k - 1]; }

 private:
  std::size_t k_;
  std::vector<double> v_;
};

}  // namespace

NeighborResult::NeighborResult(std::vector<std::size_t> orders, std::size_t count)
    : orders_(std::move(orders)), count_(count), values_(orders_.size() * count, 0.0) {}

std::size_t NeighborResult::index_of(std::size_t k) const {
  auto it = std::find(orders_.begin(), orders_.end(), k);
  if (it == orders_.end()) throw InvalidInput(fmt::format("order k={} was not computed", k));
  return static_cast<std::size_t>(it - orders_.begin());
}

double NeighborResult::at(std::size_t j, std::size_t k) const {
  return values_[j * orders_.size() + index_of(k)];
}

std::vector<double> kmax_alpha_naive(const Sample& sample, std::size_t j,
                                     std::span<const std::size_t> orders,
                                     const LambdaFamily& family) {
  check_orders(sample, orders);
  if (j >= sample.count()) throw InvalidInput("point index out of range");
  std::vector<double> all;
  all.reserve(sample.n());
  for (std::size_t i = 0; i < sample.count(); ++i) {
    if (i != j) all.push_back(alpha(sample.point(i), sample.point(j), family));
  }
  std::sort(all.begin(), all.end(), std::greater<>());
  std::vector<double> out;
  out.reserve(orders.size());
  for (std::size_t k : orders) out.push_back(all[k - 1]);
  return out;
}

NeighborResult kmax_alpha_naive_all(const Sample& sample, std::span<const std::size_t> orders,
                                    const LambdaFamily& family) {
  NeighborResult result({orders.begin(), orders.end()}, sample.count());
  for (std::size_t j = 0; j < sample.count(); ++j) {
    auto v = kmax_alpha_naive(sample, j, orders, family);
    std::copy(v.begin(), v.end(), result.point(j).begin());
  }
  return result;
}

PrefixTrie::PrefixTrie(const Sample& sample) {
  const std::size_t count = sample.count();
  const std::size_t m = sample.depth();
  sorted_.resize(count);
  for (std::size_t i = 0; i < count; ++i) sorted_[i] = static_cast<std::uint32_t>(i);
  std::stable_sort(sorted_.begin(), sorted_.end(), [&](std::uint32_t a, std::uint32_t b) {
    auto pa = sample.point(a);
    auto pb = sample.point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  leaf_of_.assign(count, -1);
  nodes_.reserve(2 * count);

  struct Pending {
    std::uint32_t lo, hi;
    std::int32_t parent;
  };
  std::vector<Pending> stack{{0, static_cast<std::uint32_t>(count), -1}};
  while (!stack.empty()) {
    Pending p = stack.back();
    stack.pop_back();
    // Sorted order: the range's common prefix is that of its two ends.
    const auto depth = static_cast<std::uint32_t>(
        common_prefix(sample.point(sorted_[p.lo]), sample.point(sorted_[p.hi - 1])));
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({p.lo, p.hi, depth, p.parent});
    if (depth == m) {
      for (std::uint32_t s = p.lo; s < p.hi; ++s) leaf_of_[sorted_[s]] = id;
      continue;
    }
    std::uint32_t start = p.lo;
    while (start < p.hi) {
      const Symbol c = sample.point(sorted_[start])[depth];
      std::uint32_t end = start + 1;
      while (end < p.hi && sample.point(sorted_[end])[depth] == c) ++end;
      stack.push_back({start, end, id});
      start = end;
    }
  }
}

NeighborResult kmax_alpha_trie(const Sample& sample, std::span<const std::size_t> orders,
                               const LambdaFamily& family, std::size_t threads) {
  const std::size_t kmax = check_orders(sample, orders);
  const PrefixTrie trie(sample);
  const auto& nodes = trie.nodes();
  const auto& sorted = trie.sorted();
  NeighborResult result({orders.begin(), orders.end()}, sample.count());

  if (family.is_zero()) {
    // alpha = shared-prefix length, so the k-th largest is the depth of the
    // deepest ancestor holding at least k other points.
    parallel_for(sample.count(), threads, [&](std::size_t j) {
      auto out = result.point(j);
      for (std::size_t o = 0; o < orders.size(); ++o) {
        std::int32_t id = trie.leaf_of(j);
        while (nodes[id].hi - nodes[id].lo - 1 < orders[o]) id = nodes[id].parent;
        out[o] = static_cast<double>(nodes[id].depth);
      }
    });
    return result;
  }

  const auto m = static_cast<double>(sample.depth());
  parallel_for(sample.count(), threads, [&](std::size_t j) {
    const SymbolView xj = sample.point(j);
    TopK top(kmax);
    std::int32_t child = trie.leaf_of(j);
    top.push_n(m, nodes[child].hi - nodes[child].lo - 1);
    for (std::int32_t id = nodes[child].parent; id >= 0; child = id, id = nodes[id].parent) {
      const PrefixTrie::Node& node = nodes[id];
      // Every point entering here first differs from x_j at node.depth + 1.
      if (top.full() && top.kth() >= static_cast<double>(node.depth) + 1.0) break;
      const PrefixTrie::Node& inner = nodes[child];
      for (std::uint32_t s = node.lo; s < node.hi; ++s) {
        if (s == inner.lo) {
          s = inner.hi - 1;
          continue;
        }
        top.push(alpha(sample.point(sorted[s]), xj, family));
      }
    }
    auto out = result.point(j);
    for (std::size_t o = 0; o < orders.size(); ++o) out[o] = top.order(orders[o]);
  });
  return result;
}

}  // namespace nnentropy
