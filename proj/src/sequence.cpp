#include "nnentropy/sequence.hpp"

#include <algorithm>
#include <string>

#include "nnentropy/errors.hpp"

namespace nnentropy {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < 2 || size > kMaxSize) {
    throw InvalidInput("alphabet size must be in [2, 256], got " + std::to_string(size));
  }
}

SymbolSequence::SymbolSequence(std::vector<Symbol> symbols, const Alphabet& alphabet)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidInput("sequence must have length >= 1");
  for (Symbol s : symbols_) {
    if (!alphabet.contains(s)) {
      throw InvalidInput("symbol " + std::to_string(s) + " outside alphabet of size " +
                         std::to_string(alphabet.size()));
    }
  }
}

Sample::Sample(const std::vector<SymbolSequence>& points, const Alphabet& alphabet)
    : count_(points.size()), depth_(points.empty() ? 0 : points.front().length()),
      alphabet_(alphabet) {
  if (count_ < 2) throw InvalidInput("sample needs at least 2 points");
  flat_.reserve(count_ * depth_);
  for (const auto& p : points) {
    if (p.length() != depth_) throw InvalidInput("sample points must share one length");
    for (Symbol s : p.view()) {
      if (!alphabet.contains(s)) throw InvalidInput("symbol outside sample alphabet");
      flat_.push_back(s);
    }
  }
}

Sample::Sample(std::vector<Symbol> flat, std::size_t count, std::size_t depth,
               const Alphabet& alphabet)
    : flat_(std::move(flat)), count_(count), depth_(depth), alphabet_(alphabet) {
  if (count_ < 2) throw InvalidInput("sample needs at least 2 points");
  if (depth_ < 1) throw InvalidInput("sample depth must be >= 1");
  if (flat_.size() != count_ * depth_) throw InvalidInput("flat buffer size != count * depth");
  if (std::any_of(flat_.begin(), flat_.end(), [&](Symbol s) { return !alphabet_.contains(s); })) {
    throw InvalidInput("symbol outside sample alphabet");
  }
}

Sample Sample::permuted(std::span<const std::size_t> order) const {
  if (order.size() != count_) throw InvalidInput("permutation size != sample count");
  std::vector<Symbol> out;
  out.reserve(flat_.size());
  for (std::size_t i : order) {
    if (i >= count_) throw InvalidInput("permutation index out of range");
    auto p = point(i);
    out.insert(out.end(), p.begin(), p.end());
  }
  return Sample(std::move(out), count_, depth_, alphabet_);
}

Sample Sample::truncated(std::size_t depth) const {
  if (depth < 1 || depth > depth_) throw InvalidInput("truncation depth out of range");
  std::vector<Symbol> out;
  out.reserve(count_ * depth);
  for (std::size_t i = 0; i < count_; ++i) {
    auto p = point(i).first(depth);
    out.insert(out.end(), p.begin(), p.end());
  }
  return Sample(std::move(out), count_, depth, alphabet_);
}

std::size_t first_mismatch_index(SymbolView x, SymbolView y) {
  if (x.size() != y.size()) throw InvalidInput("sequences differ in length");
  if (x.empty()) throw InvalidInput("sequences must have length >= 1");
  auto [ix, iy] = std::mismatch(x.begin(), x.end(), y.begin());
  if (ix == x.end()) return x.size();
  return static_cast<std::size_t>(ix - x.begin()) + 1;
}

}  // namespace nnentropy
