#include "nnentropy/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"

namespace nnentropy {

Sample read_sequences(std::istream& in) {
  std::vector<Symbol> flat;
  std::size_t count = 0;
  std::size_t depth = 0;
  std::optional<bool> tokenized;
  unsigned max_symbol = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) throw ParseError(lineno, "empty line");
    const auto last = line.find_last_not_of(" \t");
    const std::string body = line.substr(first, last - first + 1);
    const bool has_space = body.find_first_of(" \t") != std::string::npos;
    if (!tokenized) tokenized = has_space;

    std::vector<unsigned> symbols;
    if (*tokenized) {
      std::istringstream ls(body);
      std::string tok;
      while (ls >> tok) {
        if (tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 3) {
          throw ParseError(lineno, fmt::format("'{}' is not a symbol index in [0, 255]", tok));
        }
        unsigned v = static_cast<unsigned>(std::stoul(tok));
        if (v > 255) throw ParseError(lineno, fmt::format("symbol {} exceeds 255", v));
        symbols.push_back(v);
      }
    } else {
      if (has_space) throw ParseError(lineno, "whitespace inside a digit-string line");
      for (char c : body) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          throw ParseError(lineno, fmt::format("'{}' is not a symbol digit", c));
        }
        symbols.push_back(static_cast<unsigned>(c - '0'));
      }
    }
    if (count == 0) {
      depth = symbols.size();
    } else if (symbols.size() != depth) {
      throw ParseError(lineno, fmt::format("length {} differs from first line's {}",
                                           symbols.size(), depth));
    }
    for (unsigned v : symbols) {
      max_symbol = std::max(max_symbol, v);
      flat.push_back(static_cast<Symbol>(v));
    }
    ++count;
  }
  if (count < 2) {
    throw InsufficientNeighbors(
        fmt::format("sequence file has {} line(s); at least 2 are needed", count));
  }
  return Sample(std::move(flat), count, depth, Alphabet(std::max(2u, max_symbol + 1)));
}

void write_sequences(std::ostream& out, const Sample& sample) {
  const bool digits = sample.alphabet().size() <= 10;
  std::string line;
  for (std::size_t i = 0; i < sample.count(); ++i) {
    line.clear();
    for (Symbol s : sample.point(i)) {
      if (digits) {
        line.push_back(static_cast<char>('0' + s));
      } else {
        if (!line.empty()) line.push_back(' ');
        line += std::to_string(s);
      }
    }
    out << line << '\n';
  }
}

EstimateReport estimate_from_file(const std::string& path, std::size_t k,
                                  const LambdaFamily& family, std::optional<std::size_t> m) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open '{}'", path));
  Sample sample = read_sequences(in);
  if (k + 2 > sample.count()) {
    throw InsufficientNeighbors(fmt::format(
        "eta with k={} needs at least {} lines, file has {}", k, k + 2, sample.count()));
  }
  if (m) {
    if (*m < 1 || *m > sample.depth()) {
      throw InvalidInput(fmt::format("m={} outside [1, {}] (line length)", *m, sample.depth()));
    }
    if (*m < sample.depth()) sample = sample.truncated(*m);
  }
  return eta_estimator(sample, k, family);
}

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

}  // namespace nnentropy
