#include "nnentropy/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"

namespace nnentropy {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, fmt::format("'{}' is not a number", v));
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key, fmt::format("'{}' is not a nonnegative integer", v));
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError(key, fmt::format("'{}' is out of range", v));
  }
}

std::optional<std::size_t> to_auto_uint(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return static_cast<std::size_t>(to_uint(key, v));
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) {
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, fmt::format("'{}' is not a boolean", v));
}

std::vector<double> parse_probs(const std::string& key, const std::string& v) {
  try {
    return to_doubles(key, v);
  } catch (const ConfigError&) {
    throw InvalidInput(fmt::format("{}: '{}' is not a list of numbers", key, v));
  }
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
  ConfigMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "empty key");
    map[key] = trim(line.substr(eq + 1));
  }
  return map;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", fmt::format("cannot open '{}'", path));
  return parse_config(in);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "source", "markov_start", "n_plus_1", "k",      "m",      "family",
      "trials", "seed",         "beta_grid", "n_grid", "delta_grid", "output",
      "threads", "safety",      "timing"};
  return keys;
}

Source parse_source(const std::string& spec, const std::string& start_spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InvalidInput(fmt::format("source '{}': expected <type>:<parameters>", spec));
  }
  const auto type = trim(spec.substr(0, colon));
  const auto params = trim(spec.substr(colon + 1));
  if (type == "uniform") {
    if (params.empty() || params.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidInput(fmt::format("source '{}': uniform needs an alphabet size", spec));
    }
    return BernoulliSource::uniform(std::stoul(params));
  }
  if (type == "bernoulli") return BernoulliSource(parse_probs("source", params));
  if (type == "markov") {
    std::vector<std::vector<double>> rows;
    for (const auto& row : split(params, ';')) {
      if (!row.empty()) rows.push_back(parse_probs("source", row));
    }
    std::optional<std::vector<double>> start;
    if (!trim(start_spec).empty()) start = parse_probs("markov_start", start_spec);
    return MarkovSource(std::move(rows), std::move(start));
  }
  throw InvalidInput(fmt::format("source '{}': unknown type '{}'", spec, type));
}

LambdaFamily parse_family(const std::string& spec) {
  if (spec == "zero") return LambdaFamily::zero();
  if (spec.rfind("beta:", 0) == 0) {
    const auto v = trim(spec.substr(5));
    double beta = 0.0;
    try {
      std::size_t pos = 0;
      beta = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw InvalidInput(fmt::format("family '{}': beta is not a number", spec));
    }
    return LambdaFamily::beta(beta);
  }
  if (spec.rfind("table:", 0) == 0) {
    const auto path = trim(spec.substr(6));
    std::ifstream in(path);
    if (!in) throw InvalidInput(fmt::format("family table '{}' cannot be opened", path));
    std::vector<std::pair<double, double>> bp;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (trim(line).empty()) continue;
      std::istringstream ls(line);
      double t = 0.0, v = 0.0;
      std::string extra;
      if (!(ls >> t >> v) || (ls >> extra)) throw ParseError(lineno, "expected 't value'");
      bp.emplace_back(t, v);
    }
    return LambdaFamily::tabulated(std::move(bp));
  }
  throw InvalidInput(fmt::format("unknown family '{}' (zero | beta:<v> | table:<path>)", spec));
}

ExperimentConfig ExperimentConfig::from_map(const ConfigMap& map) {
  ExperimentConfig c;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) c.output = env;
  const auto& keys = config_keys();
  for (const auto& [key, value] : map) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown key");
    }
    if (key == "source") c.source_spec = value;
    else if (key == "markov_start") c.markov_start = value;
    else if (key == "n_plus_1") c.n_plus_1 = to_uint(key, value);
    else if (key == "k") c.k = to_auto_uint(key, value);
    else if (key == "m") c.m = to_auto_uint(key, value);
    else if (key == "family") c.family_spec = value;
    else if (key == "trials") c.trials = to_uint(key, value);
    else if (key == "seed") c.seed = Seed{to_uint(key, value)};
    else if (key == "beta_grid") c.beta_grid = to_doubles(key, value);
    else if (key == "n_grid") {
      c.n_grid.clear();
      for (double d : to_doubles(key, value)) {
        if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d))) {
          throw ConfigError(key, "entries must be positive integers");
        }
        c.n_grid.push_back(static_cast<std::size_t>(d));
      }
    } else if (key == "delta_grid") c.delta_grid = to_doubles(key, value);
    else if (key == "output") c.output = value;
    else if (key == "threads") c.threads = to_uint(key, value);
    else if (key == "safety") c.safety = to_double(key, value);
    else if (key == "timing") c.timing = to_bool(key, value);
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  try {
    (void)source();
  } catch (const InvalidInput& e) {
    throw ConfigError(markov_start.empty() ? "source" : "source/markov_start", e.what());
  }
  try {
    (void)family();
  } catch (const std::exception& e) {
    throw ConfigError("family", e.what());
  }
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (n_plus_1 < 3) throw ConfigError("n_plus_1", "must be >= 3");
  if (k && *k < 1) throw ConfigError("k", "must be >= 1");
  if (k && n_plus_1 < *k + 2) {
    throw ConfigError("n_plus_1", fmt::format("must be >= k + 2 = {}", *k + 2));
  }
  if (m && *m < 1) throw ConfigError("m", "must be >= 1");
  for (double b : beta_grid) {
    if (!(b > 0.0 && b < 1.0)) throw ConfigError("beta_grid", fmt::format("{} not in (0, 1)", b));
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid", "must be strictly increasing");
  }
  for (std::size_t n : n_grid) {
    if (n < 2) throw ConfigError("n_grid", "entries must be >= 2");
    if (k && n < *k + 1) throw ConfigError("n_grid", fmt::format("entry {} < k + 1", n));
  }
  for (double d : delta_grid) {
    if (!(d > 0.0)) throw ConfigError("delta_grid", "entries must be > 0");
  }
  if (!(safety >= 1.0)) throw ConfigError("safety", "must be >= 1");
}

Source ExperimentConfig::source() const { return parse_source(source_spec, markov_start); }

LambdaFamily ExperimentConfig::family() const { return parse_family(family_spec); }

}  // namespace nnentropy
