#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nnentropy/config.hpp"
#include "nnentropy/sources.hpp"
#include "nnentropy/weak_metric.hpp"

namespace nnentropy {

enum class Flag { NotApplicable, Pass, Fail };

std::string_view to_string(Flag f) noexcept;
inline Flag flag_if(bool ok) noexcept { return ok ? Flag::Pass : Flag::Fail; }

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::string family;
  double r_k = 0.0;
  double r_k1 = 0.0;
  double eta = 0.0;
  double wall_seconds = 0.0;
};

struct SummaryStats {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::string family;
  double mean_eta = 0.0;
  double var_eta = 0.0;
  double stderr_eta = 0.0;
  std::optional<double> inverse_h;          // 1/h when h > 0
  std::optional<double> bias_vs_inverse_h;  // mean_eta - 1/h
  double mean_r = 0.0;
  double var_r = 0.0;
  double stderr_r = 0.0;
  double variance_bound = 0.0;
  std::optional<double> expected_r;  // closed form, uniform source with beta = 1/|A|
  // The next two apply to uniform sources with beta = 1/|A| and m deep enough
  // that truncation is negligible.
  Flag unbiased = Flag::NotApplicable;     // |bias| <= 3 stderr_eta
  Flag variance_ok = Flag::NotApplicable;  // var_r <= variance_bound
  Flag closed_form = Flag::NotApplicable;  // |mean_r - expected_r| <= 3 stderr_r
};

// Sample mean and unbiased sample variance (0 for fewer than two values).
struct Moments {
  double mean = 0.0;
  double var = 0.0;
};
Moments moments(const std::vector<double>& values);

struct ResolvedParams {
  std::size_t n = 0;  // neighbors per point; samples hold n + 1 points
  std::size_t k = 0;
  std::size_t m = 0;
};

// Applies k = max(1, round(log n)) and m = ceil(safety log(n) / a) where the
// config says auto.
ResolvedParams resolve_params(const ExperimentConfig& config, const Source& source, std::size_t n);

// T independent trials; trial t samples with trial_seed(seed, t). Records are
// ordered by trial index regardless of scheduling.
std::vector<TrialRecord> run_trials(const Source& source, const ResolvedParams& params,
                                    const LambdaFamily& family, std::size_t trials, Seed seed,
                                    std::size_t threads = 0);

// Summary of one configuration, recomputable from its trial records.
SummaryStats summarize(const std::vector<TrialRecord>& records, const Source& source,
                       const LambdaFamily& family, const ResolvedParams& params);

struct BiasResult {
  ResolvedParams params;
  std::vector<TrialRecord> records;
  SummaryStats summary;
  bool passed() const;
};
BiasResult run_bias_experiment(const ExperimentConfig& config);

struct SweepRow {
  double beta = 0.0;
  SummaryStats summary;
  bool best = false;
};
struct SweepResult {
  ResolvedParams params;
  std::vector<TrialRecord> records;
  std::vector<SweepRow> rows;
  // Uniform sources only: the minimal-|bias| beta is 1/|A|, or the 1/|A| row
  // is within one of its standard errors of that minimum.
  Flag symmetric_beta_consistent = Flag::NotApplicable;
  bool passed() const;
};
SweepResult run_beta_sweep(const ExperimentConfig& config);

struct ConvergenceRow {
  ResolvedParams params;
  double mean_r = 0.0;
  double stderr_r = 0.0;
  double ratio = 0.0;  // mean_r / log n
  double error = 0.0;  // |ratio - 1/h|
  std::optional<double> expected_r;
  Flag closed_form = Flag::NotApplicable;
};
struct ConvergenceResult {
  double inverse_h = 0.0;
  std::vector<TrialRecord> records;
  std::vector<ConvergenceRow> rows;
  Flag trend = Flag::NotApplicable;  // error at the largest n < error at the smallest
  bool passed() const;
};
ConvergenceResult run_convergence_study(const ExperimentConfig& config);

struct ConcentrationRow {
  double delta = 0.0;
  double frequency = 0.0;  // fraction of trials with |r - mean r| > delta
  double bound = 0.0;      // mcdiarmid_tail, clamped to 1
  double slack = 0.0;      // 3 sqrt(bound (1 - bound) / T)
  Flag within_bound = Flag::NotApplicable;
};
struct ConcentrationResult {
  ResolvedParams params;
  double mean_r = 0.0;
  std::vector<TrialRecord> records;
  std::vector<ConcentrationRow> rows;
  bool passed() const;
};
// Needs T >= 100. Default delta grid: {0.1, 0.5, 1.0} * m / 8.
ConcentrationResult run_concentration_study(const ExperimentConfig& config);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timing);
void write_summary_csv(std::ostream& out, const std::vector<SummaryStats>& rows);
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_convergence_csv(std::ostream& out, const ConvergenceResult& result);
void write_concentration_csv(std::ostream& out, const ConcentrationResult& result);

// Writes <dir>/<name>_trials.csv and <dir>/<name>_summary.csv; creates dir.
void save(const BiasResult& r, const std::string& dir, bool timing);
void save(const SweepResult& r, const std::string& dir, bool timing);
void save(const ConvergenceResult& r, const std::string& dir, bool timing);
void save(const ConcentrationResult& r, const std::string& dir, bool timing);

}  // namespace nnentropy
