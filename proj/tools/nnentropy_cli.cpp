// nnentropy: nearest-neighbor entropy-rate estimation under weak metrics.
//
//   nnentropy generate --source uniform:2 --count 512 --depth 64 --seed 1 [--out FILE]
//   nnentropy estimate FILE [--k N|auto] [--family zero|beta:V|table:PATH|auto] [--m N]
//   nnentropy experiment bias|sweep|convergence|concentration [--config FILE] [--KEY VALUE]...
//   nnentropy validate [--seed N]
//
// Exit codes: 0 success, 1 validation/assertion failure, 2 config/parse error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nnentropy/config.hpp"
#include "nnentropy/errors.hpp"
#include "nnentropy/estimators.hpp"
#include "nnentropy/experiment.hpp"
#include "nnentropy/io.hpp"
#include "nnentropy/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

using namespace nnentropy;

void print_report(const EstimateReport& r) {
  std::cout << fmt::format(
      "n_plus_1: {}\nk: {}\nm: {}\nfamily: {}\nr_k: {}\nr_k_plus_1: {}\n"
      "eta (estimate of 1/h, nats^-1): {}\nh_estimate (1/eta, nats/symbol): {}\n",
      r.n + 1, r.k, r.m, r.family, format_number(r.r_k), format_number(r.r_k_plus_1),
      format_number(r.eta), r.eta > 0 ? format_number(1.0 / r.eta) : std::string("inf"));
}

int run_experiment(const std::string& kind, const ExperimentConfig& cfg) {
  bool ok = true;
  if (kind == "bias") {
    auto r = run_bias_experiment(cfg);
    save(r, cfg.output, cfg.timing);
    write_summary_csv(std::cout, {r.summary});
    ok = r.passed();
  } else if (kind == "sweep") {
    auto r = run_beta_sweep(cfg);
    save(r, cfg.output, cfg.timing);
    write_sweep_csv(std::cout, r);
    ok = r.passed();
  } else if (kind == "convergence") {
    auto r = run_convergence_study(cfg);
    save(r, cfg.output, cfg.timing);
    write_convergence_csv(std::cout, r);
    ok = r.passed();
  } else {
    auto r = run_concentration_study(cfg);
    save(r, cfg.output, cfg.timing);
    write_concentration_csv(std::cout, r);
    ok = r.passed();
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest-neighbor entropy-rate estimation under weak metrics"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a sample of sequences drawn from a source");
  std::string gen_source = "uniform:2", gen_start, gen_out;
  std::size_t gen_count = 512, gen_depth = 64;
  std::uint64_t gen_seed = 1;
  gen->add_option("--source", gen_source, "uniform:A | bernoulli:p,... | markov:row;row");
  gen->add_option("--markov_start", gen_start, "Start distribution for markov sources");
  gen->add_option("--count", gen_count, "Number of sequences (n+1)");
  gen->add_option("--depth", gen_depth, "Sequence length m");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate 1/h from a file of sequences");
  std::string est_path, est_k = "auto", est_family = "auto";
  std::optional<std::size_t> est_m;
  est->add_option("path", est_path, "One sequence per line")->required();
  est->add_option("--k", est_k, "Neighbor order, or auto = max(1, round(log n))");
  est->add_option("--family", est_family, "zero | beta:V | table:PATH | auto (beta:1/|A|)");
  est->add_option("--m", est_m, "Truncation depth (default: full line length)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo study and write CSVs");
  std::string exp_kind, exp_config;
  exp->add_option("kind", exp_kind, "bias | sweep | convergence | concentration")
      ->required()
      ->check(CLI::IsMember({"bias", "sweep", "convergence", "concentration"}));
  exp->add_option("--config", exp_config, "key = value configuration file");
  std::map<std::string, std::string> overrides;
  for (const auto& key : config_keys()) {
    exp->add_option_function<std::string>(
        "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
        "Override config key '" + key + "'");
  }

  // validate
  auto* val = app.add_subcommand("validate", "Run the built-in oracle and property checks");
  std::uint64_t val_seed = 1;
  val->add_option("--seed", val_seed, "Seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen) {
      const Source src = parse_source(gen_source, gen_start);
      const Sample s = sample(src, gen_count, gen_depth, Seed{gen_seed});
      if (gen_out.empty()) {
        write_sequences(std::cout, s);
      } else {
        std::ofstream out(gen_out);
        if (!out) throw ParseError(0, "cannot write '" + gen_out + "'");
        write_sequences(out, s);
      }
      return kOk;
    }
    if (*est) {
      std::ifstream in(est_path);
      if (!in) throw ParseError(0, "cannot open '" + est_path + "'");
      const Sample s = read_sequences(in);
      std::size_t k = 0;
      if (est_k == "auto") {
        k = auto_order(s.n());
      } else {
        k = std::stoul(est_k);
      }
      const LambdaFamily family =
          est_family == "auto"
              ? LambdaFamily::beta(1.0 / static_cast<double>(s.alphabet().size()))
              : parse_family(est_family);
      print_report(estimate_from_file(est_path, k, family, est_m));
      return kOk;
    }
    if (*exp) {
      ConfigMap map;
      if (!exp_config.empty()) map = parse_config_file(exp_config);
      for (const auto& [k, v] : overrides) map[k] = v;
      return run_experiment(exp_kind, ExperimentConfig::from_map(map));
    }
    return run_validation(std::cout, Seed{val_seed}) ? kOk : kFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
  } catch (const InsufficientNeighbors& e) {
    std::cerr << "insufficient neighbors: " << e.what() << '\n';
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
  } catch (const std::logic_error& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
  }
  return kBadInput;
}
