#include "nnentropy/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"
#include "nnentropy/estimators.hpp"
#include "nnentropy/io.hpp"
#include "nnentropy/parallel.hpp"

namespace nnentropy {
namespace {

// Largest n^2 |A|^-m at which the untruncated closed form is still used.
constexpr double kTruncationMass = 1e-4;

std::optional<double> inverse_entropy(const Source& source) {
  try {
    const double h = true_entropy(source);
    if (h > 0.0) return 1.0 / h;
  } catch (const InvalidInput&) {
  }
  return std::nullopt;
}

// Alphabet size when the closed form for E r applies: uniform i.i.d. source,
// beta = 1/|A|, and m deep enough that a shared full prefix is negligible.
std::optional<std::size_t> closed_form_alphabet(const Source& source, const LambdaFamily& family,
                                                const ResolvedParams& p) {
  const auto* b = std::get_if<BernoulliSource>(&source);
  const auto* beta = std::get_if<LambdaFamily::Beta>(&family.variant());
  if (!b || !beta || !b->is_uniform()) return std::nullopt;
  const auto a = static_cast<double>(b->probs().size());
  if (std::abs(beta->beta - 1.0 / a) > 1e-12) return std::nullopt;
  const double nd = static_cast<double>(p.n);
  if (nd * nd * std::pow(a, -static_cast<double>(p.m)) > kTruncationMass) return std::nullopt;
  return b->probs().size();
}

std::string opt_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

bool all_pass(std::initializer_list<Flag> flags) {
  return std::none_of(flags.begin(), flags.end(), [](Flag f) { return f == Flag::Fail; });
}

}  // namespace

std::string_view to_string(Flag f) noexcept {
  switch (f) {
    case Flag::Pass: return "pass";
    case Flag::Fail: return "fail";
    default: return "na";
  }
}

Moments moments(const std::vector<double>& values) {
  Moments mo;
  if (values.empty()) return mo;
  double sum = 0.0;
  for (double v : values) sum += v;
  mo.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mo.mean) * (v - mo.mean);
    mo.var = ss / static_cast<double>(values.size() - 1);
  }
  return mo;
}

ResolvedParams resolve_params(const ExperimentConfig& config, const Source& source, std::size_t n) {
  ResolvedParams p;
  p.n = n;
  p.k = config.k ? *config.k : auto_order(n);
  if (config.m) {
    p.m = *config.m;
  } else {
    const double a = decay_rate(source);
    if (!(a > 0.0)) {
      throw ConfigError("m", "auto depth needs a source with all probabilities < 1; set m");
    }
    p.m = truncation_depth(n, a, config.safety);
  }
  if (p.k + 1 > n) {
    throw ConfigError("k", fmt::format("k={} needs n >= {}, sample has n={}", p.k, p.k + 1, n));
  }
  return p;
}

std::vector<TrialRecord> run_trials(const Source& source, const ResolvedParams& params,
                                    const LambdaFamily& family, std::size_t trials, Seed seed,
                                    std::size_t threads) {
  std::vector<TrialRecord> records(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto start = std::chrono::steady_clock::now();
    const Sample s = sample(source, params.n + 1, params.m, trial_seed(seed, t));
    const EstimateReport rep = eta_estimator(s, params.k, family);
    TrialRecord& rec = records[t];
    rec.trial = t;
    rec.n = rep.n;
    rec.k = rep.k;
    rec.m = rep.m;
    rec.family = rep.family;
    rec.r_k = rep.r_k;
    rec.r_k1 = rep.r_k_plus_1;
    rec.eta = rep.eta;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return records;
}

SummaryStats summarize(const std::vector<TrialRecord>& records, const Source& source,
                       const LambdaFamily& family, const ResolvedParams& params) {
  SummaryStats s;
  s.n = params.n;
  s.k = params.k;
  s.m = params.m;
  s.trials = records.size();
  s.family = family.descriptor();
  std::vector<double> eta, r;
  eta.reserve(records.size());
  r.reserve(records.size());
  for (const auto& rec : records) {
    eta.push_back(rec.eta);
    r.push_back(rec.r_k);
  }
  const auto me = moments(eta);
  const auto mr = moments(r);
  const double t = static_cast<double>(std::max<std::size_t>(1, records.size()));
  s.mean_eta = me.mean;
  s.var_eta = me.var;
  s.stderr_eta = std::sqrt(me.var / t);
  s.mean_r = mr.mean;
  s.var_r = mr.var;
  s.stderr_r = std::sqrt(mr.var / t);
  s.variance_bound = variance_bound(params.n, params.k, params.m);
  s.variance_ok = flag_if(s.var_r <= s.variance_bound);
  if (auto inv = inverse_entropy(source)) {
    s.inverse_h = *inv;
    s.bias_vs_inverse_h = s.mean_eta - *inv;
  }
  // Unbiasedness and the closed form are only claimed for the uniform source
  // with beta = 1/|A|; elsewhere the bias is reported but not asserted.
  if (auto a = closed_form_alphabet(source, family, params)) {
    s.unbiased = flag_if(std::abs(*s.bias_vs_inverse_h) <= 3.0 * s.stderr_eta);
    s.expected_r = expected_r_symmetric(params.n, params.k, *a);
    s.closed_form = flag_if(std::abs(s.mean_r - *s.expected_r) <= 3.0 * s.stderr_r);
  }
  return s;
}

bool BiasResult::passed() const {
  return all_pass({summary.unbiased, summary.variance_ok, summary.closed_form});
}

BiasResult run_bias_experiment(const ExperimentConfig& config) {
  const Source source = config.source();
  const LambdaFamily family = config.family();
  BiasResult r;
  r.params = resolve_params(config, source, config.n_plus_1 - 1);
  r.records = run_trials(source, r.params, family, config.trials, config.seed, config.threads);
  r.summary = summarize(r.records, source, family, r.params);
  return r;
}

bool SweepResult::passed() const { return symmetric_beta_consistent != Flag::Fail; }

SweepResult run_beta_sweep(const ExperimentConfig& config) {
  if (config.beta_grid.empty()) throw ConfigError("beta_grid", "sweep needs a nonempty grid");
  const Source source = config.source();
  if (!inverse_entropy(source)) {
    throw ConfigError("source", "beta sweep needs a source with known entropy h > 0");
  }
  SweepResult res;
  res.params = resolve_params(config, source, config.n_plus_1 - 1);
  for (double beta : config.beta_grid) {
    const auto family = LambdaFamily::beta(beta);
    auto recs = run_trials(source, res.params, family, config.trials, config.seed, config.threads);
    res.rows.push_back({beta, summarize(recs, source, family, res.params), false});
    res.records.insert(res.records.end(), recs.begin(), recs.end());
  }
  auto abs_bias = [](const SweepRow& row) { return std::abs(*row.summary.bias_vs_inverse_h); };
  auto best = std::min_element(res.rows.begin(), res.rows.end(),
                               [&](const auto& a, const auto& b) { return abs_bias(a) < abs_bias(b); });
  best->best = true;

  const auto* b = std::get_if<BernoulliSource>(&source);
  if (res.rows.size() > 1 && b && b->is_uniform()) {
    const double target = 1.0 / static_cast<double>(b->probs().size());
    auto sym = std::find_if(res.rows.begin(), res.rows.end(),
                            [&](const auto& row) { return std::abs(row.beta - target) < 1e-9; });
    if (sym != res.rows.end()) {
      res.symmetric_beta_consistent =
          flag_if(sym->best || abs_bias(*sym) - abs_bias(*best) <= sym->summary.stderr_eta);
    }
  }
  return res;
}

bool ConvergenceResult::passed() const {
  if (trend == Flag::Fail) return false;
  return std::none_of(rows.begin(), rows.end(),
                      [](const auto& row) { return row.closed_form == Flag::Fail; });
}

ConvergenceResult run_convergence_study(const ExperimentConfig& config) {
  const Source source = config.source();
  const LambdaFamily family = config.family();
  auto inv = inverse_entropy(source);
  if (!inv) throw ConfigError("source", "convergence study needs a source with entropy h > 0");
  std::vector<std::size_t> grid = config.n_grid;
  if (grid.empty()) grid.push_back(config.n_plus_1 - 1);

  ConvergenceResult res;
  res.inverse_h = *inv;
  for (std::size_t n : grid) {
    ConvergenceRow row;
    row.params = resolve_params(config, source, n);
    auto recs = run_trials(source, row.params, family, config.trials, config.seed, config.threads);
    const auto s = summarize(recs, source, family, row.params);
    row.mean_r = s.mean_r;
    row.stderr_r = s.stderr_r;
    row.ratio = s.mean_r / std::log(static_cast<double>(n));
    row.error = std::abs(row.ratio - res.inverse_h);
    row.expected_r = s.expected_r;
    row.closed_form = s.closed_form;
    res.rows.push_back(row);
    res.records.insert(res.records.end(), recs.begin(), recs.end());
  }
  if (res.rows.size() > 1) res.trend = flag_if(res.rows.back().error < res.rows.front().error);
  return res;
}

bool ConcentrationResult::passed() const {
  return std::none_of(rows.begin(), rows.end(),
                      [](const auto& row) { return row.within_bound == Flag::Fail; });
}

ConcentrationResult run_concentration_study(const ExperimentConfig& config) {
  if (config.trials < 100) throw ConfigError("trials", "concentration study needs T >= 100");
  const Source source = config.source();
  const LambdaFamily family = config.family();
  ConcentrationResult res;
  res.params = resolve_params(config, source, config.n_plus_1 - 1);
  res.records = run_trials(source, res.params, family, config.trials, config.seed, config.threads);
  std::vector<double> r;
  for (const auto& rec : res.records) r.push_back(rec.r_k);
  res.mean_r = moments(r).mean;

  std::vector<double> deltas = config.delta_grid;
  if (deltas.empty()) {
    const double m = static_cast<double>(res.params.m);
    deltas = {0.1 * m / 8.0, 0.5 * m / 8.0, 1.0 * m / 8.0};
  }
  const double t = static_cast<double>(config.trials);
  for (double delta : deltas) {
    ConcentrationRow row;
    row.delta = delta;
    const auto exceed = std::count_if(r.begin(), r.end(),
                                      [&](double v) { return std::abs(v - res.mean_r) > delta; });
    row.frequency = static_cast<double>(exceed) / t;
    row.bound = mcdiarmid_tail(res.params.n, res.params.k, res.params.m, delta);
    row.slack = 3.0 * std::sqrt(row.bound * (1.0 - row.bound) / t);
    row.within_bound = flag_if(row.frequency <= row.bound + row.slack);
    res.rows.push_back(row);
  }
  return res;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timing) {
  out << "trial,n,k,m,family,r_k,r_k1,eta" << (timing ? ",wall_seconds" : "") << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{}", r.trial, r.n, r.k, r.m, r.family,
                       format_number(r.r_k), format_number(r.r_k1), format_number(r.eta));
    if (timing) out << ',' << format_number(r.wall_seconds);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryStats>& rows) {
  out << "n,k,m,trials,family,mean_eta,var_eta,stderr_eta,inverse_h,bias_vs_inverse_h,"
         "mean_r,var_r,stderr_r,variance_bound,expected_r,unbiased,variance_ok,closed_form\n";
  for (const auto& s : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.n, s.k, s.m,
                       s.trials, s.family, format_number(s.mean_eta), format_number(s.var_eta),
                       format_number(s.stderr_eta), opt_number(s.inverse_h),
                       opt_number(s.bias_vs_inverse_h), format_number(s.mean_r),
                       format_number(s.var_r), format_number(s.stderr_r),
                       format_number(s.variance_bound), opt_number(s.expected_r),
                       to_string(s.unbiased), to_string(s.variance_ok), to_string(s.closed_form));
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "beta,mean_eta,stderr_eta,bias,best,symmetric_beta_consistent\n";
  for (const auto& row : result.rows) {
    out << fmt::format("{},{},{},{},{},{}\n", format_number(row.beta),
                       format_number(row.summary.mean_eta), format_number(row.summary.stderr_eta),
                       opt_number(row.summary.bias_vs_inverse_h), row.best ? 1 : 0,
                       to_string(result.symmetric_beta_consistent));
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceResult& result) {
  out << "n,k,m,mean_r,stderr_r,r_over_log_n,inverse_h,error,expected_r,closed_form,trend\n";
  for (const auto& row : result.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", row.params.n, row.params.k,
                       row.params.m, format_number(row.mean_r), format_number(row.stderr_r),
                       format_number(row.ratio), format_number(result.inverse_h),
                       format_number(row.error), opt_number(row.expected_r),
                       to_string(row.closed_form), to_string(result.trend));
  }
}

void write_concentration_csv(std::ostream& out, const ConcentrationResult& result) {
  out << "n,k,m,mean_r,delta,frequency,bound,slack,within_bound\n";
  for (const auto& row : result.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", result.params.n, result.params.k,
                       result.params.m, format_number(result.mean_r), format_number(row.delta),
                       format_number(row.frequency), format_number(row.bound),
                       format_number(row.slack), to_string(row.within_bound));
  }
}

void save(const BiasResult& r, const std::string& dir, bool timing) {
  auto trials = open_output(dir, "bias_trials.csv");
  write_trials_csv(trials, r.records, timing);
  auto summary = open_output(dir, "bias_summary.csv");
  write_summary_csv(summary, {r.summary});
}

void save(const SweepResult& r, const std::string& dir, bool timing) {
  auto trials = open_output(dir, "sweep_trials.csv");
  write_trials_csv(trials, r.records, timing);
  auto summary = open_output(dir, "sweep_summary.csv");
  write_sweep_csv(summary, r);
}

void save(const ConvergenceResult& r, const std::string& dir, bool timing) {
  auto trials = open_output(dir, "convergence_trials.csv");
  write_trials_csv(trials, r.records, timing);
  auto summary = open_output(dir, "convergence_summary.csv");
  write_convergence_csv(summary, r);
}

void save(const ConcentrationResult& r, const std::string& dir, bool timing) {
  auto trials = open_output(dir, "concentration_trials.csv");
  write_trials_csv(trials, r.records, timing);
  auto summary = open_output(dir, "concentration_summary.csv");
  write_concentration_csv(summary, r);
}

}  // namespace nnentropy
