// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nnentropy/estimators.hpp"
#include "nnentropy/experiment.hpp"
#include "nnentropy/validation.hpp"

using namespace nnentropy;

namespace {

constexpr std::uint64_t kSeed = 20240101;

struct Outcome {
  bool passed;
  std::string detail;
};

// (H_n - H_{k-1}) / log|A| summed in long double, independent of the library.
double closed_form_r(std::size_t n, std::size_t k, std::size_t alphabet) {
  long double h = 0.0L;
  for (std::size_t s = k; s <= n; ++s) h += 1.0L / static_cast<long double>(s);
  return static_cast<double>(h / std::log(static_cast<long double>(alphabet)));
}

ExperimentConfig base_config(std::size_t alphabet, std::size_t k) {
  ExperimentConfig c;
  c.source_spec = fmt::format("uniform:{}", alphabet);
  c.family_spec = fmt::format("beta:{:.17g}", 1.0 / static_cast<double>(alphabet));
  c.n_plus_1 = 512;
  c.m = 64;
  c.k = k;
  c.trials = 200;
  c.seed = Seed{kSeed};
  c.threads = 0;
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome unbiasedness() {
  const auto r = run_bias_experiment(base_config(2, 3));
  const double target = 1.0 / std::log(2.0);
  const double dev = std::abs(r.summary.mean_eta - target);
  const double se = r.summary.stderr_eta;
  return {dev <= 3.0 * se && se <= 0.05,
          fmt::format("mean eta {:.6f} vs 1/log 2 = {:.6f}; |diff| {:.5f} <= 3se {:.5f}; se {:.5f} <= 0.05",
                      r.summary.mean_eta, target, dev, 3.0 * se, se)};
}

const std::vector<std::pair<std::size_t, std::size_t>> kClosedFormConfigs{
    {2, 3}, {2, 1}, {3, 1}, {3, 3}};

Outcome closed_form_expectation() {
  bool ok = true;
  std::string detail;
  for (auto [a, k] : kClosedFormConfigs) {
    const auto r = run_bias_experiment(base_config(a, k));
    const double expect = closed_form_r(511, k, a);
    const double dev = std::abs(r.summary.mean_r - expect);
    const bool pass = dev <= 3.0 * r.summary.stderr_r;
    ok = ok && pass;
    detail += fmt::format("[|A|={} k={}: mean r {:.5f} vs {:.5f}, |diff| {:.5f} <= {:.5f} {}] ", a, k,
                          r.summary.mean_r, expect, dev, 3.0 * r.summary.stderr_r,
                          pass ? "ok" : "FAIL");
  }
  return {ok, detail};
}

Outcome variance_bound_holds() {
  bool ok = true;
  std::string detail;
  for (auto [a, k] : kClosedFormConfigs) {
    const auto r = run_bias_experiment(base_config(a, k));
    const double bound = 64.0 * 64.0 * (64.0 * static_cast<double>(k) + 1.0) *
                         (64.0 * static_cast<double>(k) + 1.0) / (4.0 * 512.0);
    const bool pass = r.summary.var_r <= bound;
    ok = ok && pass;
    detail += fmt::format("[|A|={} k={}: var r {:.3g} <= {:.6g} {}] ", a, k, r.summary.var_r, bound,
                          pass ? "ok" : "FAIL");
  }
  return {ok, detail};
}

Outcome concentration() {
  bool ok = true;
  std::string detail;
  struct Case {
    std::size_t n_plus_1, k, m;
  };
  for (const Case& cs : {Case{256, 1, 32}, Case{512, 3, 64}}) {
    auto c = base_config(2, cs.k);
    c.n_plus_1 = cs.n_plus_1;
    c.m = cs.m;
    c.trials = 500;
    const double m = static_cast<double>(cs.m);
    c.delta_grid = {0.1 * m / 8.0, 0.5 * m / 8.0, 1.0 * m / 8.0};
    const auto r = run_concentration_study(c);
    for (const auto& row : r.rows) {
      // Recompute the bound here rather than trusting the row.
      const double km1 = static_cast<double>(cs.k) * m + 1.0;
      const double raw = 2.0 * std::exp(-2.0 * static_cast<double>(cs.n_plus_1) * row.delta *
                                        row.delta / (m * m * km1 * km1));
      const double b = std::min(1.0, raw);
      const double limit = b + 3.0 * std::sqrt(b * (1.0 - b) / 500.0);
      const bool pass = row.frequency <= limit;
      ok = ok && pass;
      detail += fmt::format("[n+1={} k={} m={} delta={:.3g}: freq {:.3f} <= {:.3g} {}] ", cs.n_plus_1,
                            cs.k, cs.m, row.delta, row.frequency, limit, pass ? "ok" : "FAIL");
    }
  }
  return {ok, detail};
}

Outcome oracle_equivalence() {
  const auto r = check_oracle_equivalence(100, Seed{kSeed});
  return {r.passed, r.detail};
}

Outcome metric_properties() {
  const auto r = check_metric_properties(10000, 1000, Seed{kSeed});
  return {r.passed, r.detail};
}

Outcome fixed_point() {
  const auto r = check_beta_fixed_point(0.5);
  return {r.passed, r.detail + " (tolerance 1e-10)"};
}

Outcome convergence_trend() {
  ExperimentConfig c;
  c.source_spec = "markov:0.9,0.1;0.5,0.5";
  c.family_spec = "beta:0.5";
  c.n_grid = {256, 1024, 4096};
  c.trials = 100;
  c.seed = Seed{kSeed};
  c.threads = 0;
  const auto r = run_convergence_study(c);
  std::string detail = fmt::format("1/h = {:.6f}; ", r.inverse_h);
  for (const auto& row : r.rows) {
    detail += fmt::format("[n={} k={} m={}: r/log n {:.4f}, err {:.4f}] ", row.params.n, row.params.k,
                          row.params.m, row.ratio, row.error);
  }
  const bool pass = r.rows.size() == 3 && r.rows.back().error < r.rows.front().error &&
                    std::abs(r.inverse_h - 1.0 / 0.386427) < 1e-5;
  return {pass, detail};
}

Outcome beta_sweep() {
  auto c = base_config(2, 3);
  c.beta_grid = {0.3, 0.5, 0.7};
  const auto r = run_beta_sweep(c);
  double min_bias = INFINITY;
  for (const auto& row : r.rows) min_bias = std::min(min_bias, std::abs(*row.summary.bias_vs_inverse_h));
  std::string detail;
  bool pass = false;
  for (const auto& row : r.rows) {
    const double b = std::abs(*row.summary.bias_vs_inverse_h);
    detail += fmt::format("[beta={}: |bias| {:.5f} se {:.5f}{}] ", row.beta, b, row.summary.stderr_eta,
                          row.best ? " min" : "");
    if (row.beta == 0.5) pass = row.best || b - min_bias <= row.summary.stderr_eta;
  }
  return {pass, detail};
}

Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "nnentropy_acceptance_determinism";
  std::filesystem::remove_all(base);
  std::vector<std::string> files;
  for (std::size_t threads : {0u, 0u, 1u}) {
    auto c = base_config(2, 3);
    c.threads = threads;
    const auto dir = base / std::to_string(files.size());
    save(run_bias_experiment(c), dir.string(), false);
    files.push_back(read_file(dir / "bias_trials.csv"));
  }
  const bool pass = !files[0].empty() && files[0] == files[1] && files[0] == files[2];
  std::filesystem::remove_all(base);
  return {pass, fmt::format("3 runs, {} bytes each, byte-identical: {}", files[0].size(), pass)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"unbiasedness of eta at beta = 1/|A|", unbiasedness},
      {"closed-form expectation of r", closed_form_expectation},
      {"variance bound on r", variance_bound_holds},
      {"McDiarmid concentration", concentration},
      {"trie vs naive oracle equivalence", oracle_equivalence},
      {"weak-metric properties", metric_properties},
      {"beta-family fixed point", fixed_point},
      {"convergence trend of r / log n", convergence_trend},
      {"beta-sweep sanity", beta_sweep},
      {"determinism of per-trial CSV", determinism},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::strtoul(argv[i], nullptr, 10));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.count(i + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, {}};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} [{}] {} ({:.1f}s): {}\n", o.passed ? "PASS" : "FAIL", i + 1,
                             criteria[i].first, secs, o.detail);
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
