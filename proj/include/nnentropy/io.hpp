#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "nnentropy/estimators.hpp"
#include "nnentropy/sequence.hpp"
#include "nnentropy/weak_metric.hpp"

namespace nnentropy {

// One sequence per line. Lines without inner whitespace are read as digit
// strings (alphabets of up to 10 symbols); otherwise each line is a list of
// whitespace-separated integers in [0, 255]. The alphabet size is one more
// than the largest symbol present (at least 2). All lines must share one
// length. Errors are ParseError with the 1-based line number.
Sample read_sequences(std::istream& in);

// Inverse of read_sequences: digits for alphabets <= 10, integers otherwise.
void write_sequences(std::ostream& out, const Sample& sample);

// Reads a sequence file, keeps the first m symbols of each line (all of them
// when m is empty) and runs the eta estimator.
EstimateReport estimate_from_file(const std::string& path, std::size_t k,
                                  const LambdaFamily& family,
                                  std::optional<std::size_t> m = std::nullopt);

// Number formatting used in every CSV: 12 significant digits.
std::string format_number(double v);

}  // namespace nnentropy
