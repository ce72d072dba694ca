#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace nnentropy {

using Symbol = std::uint8_t;
using SymbolView = std::span<const Symbol>;

// Finite alphabet {0, ..., size-1}; 2 <= size <= 256.
class Alphabet {
 public:
  static constexpr std::size_t kMaxSize = 256;

  explicit Alphabet(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s < size_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

// Immutable m-truncation of a point of A^N.
class SymbolSequence {
 public:
  SymbolSequence(std::vector<Symbol> symbols, const Alphabet& alphabet);
  SymbolSequence(std::initializer_list<Symbol> symbols, const Alphabet& alphabet)
      : SymbolSequence(std::vector<Symbol>(symbols), alphabet) {}

  std::size_t length() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }
  SymbolView view() const noexcept { return symbols_; }
  operator SymbolView() const noexcept { return symbols_; }

 private:
  std::vector<Symbol> symbols_;
};

// n+1 sequences of a common depth m over a common alphabet, stored row-major.
class Sample {
 public:
  Sample(const std::vector<SymbolSequence>& points, const Alphabet& alphabet);
  // Takes ownership of a flat count*depth buffer.
  Sample(std::vector<Symbol> flat, std::size_t count, std::size_t depth, const Alphabet& alphabet);

  std::size_t count() const noexcept { return count_; }
  // n in the estimator formulas: number of neighbors of each point.
  std::size_t n() const noexcept { return count_ - 1; }
  std::size_t depth() const noexcept { return depth_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }

  SymbolView point(std::size_t i) const noexcept {
    return SymbolView(flat_).subspan(i * depth_, depth_);
  }
  SymbolView flat() const noexcept { return flat_; }

  // Same points reordered so that result.point(i) == point(order[i]).
  Sample permuted(std::span<const std::size_t> order) const;
  // Every point cut to its first `depth` symbols.
  Sample truncated(std::size_t depth) const;

 private:
  std::vector<Symbol> flat_;
  std::size_t count_;
  std::size_t depth_;
  Alphabet alphabet_;
};

// Smallest 1-based position where x and y differ, or m when they agree on all
// m coordinates. Equals -log of the truncated standard metric rho0^(m).
std::size_t first_mismatch_index(SymbolView x, SymbolView y);

}  // namespace nnentropy
