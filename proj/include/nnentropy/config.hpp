#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nnentropy/rng.hpp"
#include "nnentropy/sources.hpp"
#include "nnentropy/weak_metric.hpp"

namespace nnentropy {

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "NNENTROPY_OUTPUT_DIR";

// Flat key = value settings; later assignments override earlier ones.
using ConfigMap = std::map<std::string, std::string>;

// Parses "key = value" lines. '#' starts a comment; blank lines are ignored.
ConfigMap parse_config(std::istream& in);
ConfigMap parse_config_file(const std::string& path);

// Keys accepted by ExperimentConfig::from_map.
const std::vector<std::string>& config_keys();

// Source syntax:
//   uniform:<alphabet size>
//   bernoulli:<p0>,<p1>,...
//   markov:<row0>;<row1>;...   rows are comma-separated probabilities
// A Markov start distribution may be given separately (markov_start).
Source parse_source(const std::string& spec, const std::string& start_spec = "");

// Family syntax: zero | beta:<value> | table:<path>. A table file holds one
// "t value" pair per line.
LambdaFamily parse_family(const std::string& spec);

struct ExperimentConfig {
  std::string source_spec = "uniform:2";
  std::string markov_start;
  std::size_t n_plus_1 = 512;
  std::optional<std::size_t> k;  // nullopt: auto
  std::optional<std::size_t> m;  // nullopt: auto
  std::string family_spec = "beta:0.5";
  std::size_t trials = 200;
  Seed seed{20240101};
  std::vector<double> beta_grid;
  std::vector<std::size_t> n_grid;  // neighbor counts n (samples of n + 1 points)
  std::vector<double> delta_grid;
  std::string output = ".";
  std::size_t threads = 0;
  double safety = 2.0;
  bool timing = false;

  // Throws ConfigError naming the offending key.
  static ExperimentConfig from_map(const ConfigMap& map);
  void validate() const;

  Source source() const;
  LambdaFamily family() const;
};

}  // namespace nnentropy
