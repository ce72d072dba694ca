#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "nnentropy/errors.hpp"
#include "nnentropy/estimators.hpp"
#include "nnentropy/experiment.hpp"

using namespace nnentropy;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.source_spec = "uniform:2";
  c.n_plus_1 = 64;
  c.k = 2;
  c.m = 32;
  c.family_spec = "beta:0.5";
  c.trials = 30;
  c.seed = Seed{17};
  c.threads = 1;
  return c;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

}  // namespace

TEST(ResolveParams, AutoOrderAndDepth) {
  auto c = small_config();
  c.k.reset();
  c.m.reset();
  auto p = resolve_params(c, c.source(), 511);
  EXPECT_EQ(p.k, 6u);
  EXPECT_EQ(p.m, static_cast<std::size_t>(std::ceil(2.0 * std::log(511.0) / std::log(2.0))));

  c.source_spec = "bernoulli:1,0";
  EXPECT_THROW(resolve_params(c, c.source(), 511), ConfigError);
}

TEST(BiasExperiment, DegenerateSourceGivesZeroEta) {
  auto c = small_config();
  c.source_spec = "bernoulli:1,0";
  c.m = 8;
  auto r = run_bias_experiment(c);
  EXPECT_EQ(r.summary.mean_eta, 0.0);
  EXPECT_EQ(r.summary.var_eta, 0.0);
  EXPECT_FALSE(r.summary.inverse_h.has_value());
  EXPECT_EQ(r.summary.unbiased, Flag::NotApplicable);
}

TEST(BiasExperiment, RecordsAreConsistent) {
  auto r = run_bias_experiment(small_config());
  ASSERT_EQ(r.records.size(), 30u);
  for (std::size_t t = 0; t < r.records.size(); ++t) {
    const auto& rec = r.records[t];
    EXPECT_EQ(rec.trial, t);
    EXPECT_NEAR(rec.eta, 2.0 * (rec.r_k - rec.r_k1), 1e-12);
  }
  EXPECT_EQ(r.summary.variance_ok, Flag::Pass);
  EXPECT_DOUBLE_EQ(r.summary.stderr_eta, std::sqrt(r.summary.var_eta / 30.0));
  ASSERT_TRUE(r.summary.inverse_h.has_value());
  EXPECT_NEAR(*r.summary.inverse_h, 1.0 / std::log(2.0), 1e-15);
  // m = 32 with 63 neighbors leaves a full-prefix mass of 63^2 2^-32 < 1e-4.
  ASSERT_TRUE(r.summary.expected_r.has_value());
  EXPECT_DOUBLE_EQ(*r.summary.expected_r, expected_r_symmetric(63, 2, 2));
}

TEST(BiasExperiment, ClosedFormSkippedWhenNotApplicable) {
  auto c = small_config();
  c.family_spec = "beta:0.4";
  EXPECT_FALSE(run_bias_experiment(c).summary.expected_r.has_value());
  c.family_spec = "beta:0.5";
  c.m = 10;  // shared full prefixes are common at this depth
  EXPECT_FALSE(run_bias_experiment(c).summary.expected_r.has_value());
}

TEST(BiasExperiment, DeterministicAcrossRunsAndThreadCounts) {
  auto c = small_config();
  auto csv = [](const BiasResult& r) {
    std::ostringstream out;
    write_trials_csv(out, r.records, false);
    write_summary_csv(out, {r.summary});
    return out.str();
  };
  const auto a = csv(run_bias_experiment(c));
  EXPECT_EQ(a, csv(run_bias_experiment(c)));
  c.threads = 3;
  EXPECT_EQ(a, csv(run_bias_experiment(c)));
  c.seed = Seed{18};
  EXPECT_NE(a, csv(run_bias_experiment(c)));
}

TEST(BiasExperiment, TimingColumnOnlyWhenRequested) {
  auto r = run_bias_experiment(small_config());
  std::ostringstream plain, timed;
  write_trials_csv(plain, r.records, false);
  write_trials_csv(timed, r.records, true);
  EXPECT_EQ(plain.str().find("wall_seconds"), std::string::npos);
  EXPECT_NE(timed.str().find("wall_seconds"), std::string::npos);
}

TEST(BiasExperiment, SummaryRecomputableFromTrialCsv) {
  auto r = run_bias_experiment(small_config());
  std::ostringstream trials, summary;
  write_trials_csv(trials, r.records, false);
  write_summary_csv(summary, {r.summary});
  const auto t = parse_csv(trials.str());
  const auto s = parse_csv(summary.str());
  ASSERT_EQ(t.size(), 31u);
  ASSERT_EQ(s.size(), 2u);
  std::vector<double> eta, rk;
  for (std::size_t i = 1; i < t.size(); ++i) {
    eta.push_back(std::stod(t[i][column(t[0], "eta")]));
    rk.push_back(std::stod(t[i][column(t[0], "r_k")]));
  }
  const auto me = moments(eta);
  const auto mr = moments(rk);
  auto cell = [&](const std::string& name) { return std::stod(s[1][column(s[0], name)]); };
  EXPECT_NEAR(cell("mean_eta"), me.mean, 1e-9 * std::abs(me.mean));
  EXPECT_NEAR(cell("var_eta"), me.var, 1e-6 * me.var);
  EXPECT_NEAR(cell("stderr_eta"), std::sqrt(me.var / 30.0), 1e-6 * std::sqrt(me.var / 30.0));
  EXPECT_NEAR(cell("mean_r"), mr.mean, 1e-9 * mr.mean);
  EXPECT_NEAR(cell("var_r"), mr.var, 1e-6 * mr.var);
  EXPECT_NEAR(cell("bias_vs_inverse_h"), me.mean - 1.0 / std::log(2.0), 1e-9);
}

TEST(BetaSweep, SingleValueHasNoComparison) {
  auto c = small_config();
  c.beta_grid = {0.5};
  auto r = run_beta_sweep(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.rows[0].best);
  EXPECT_EQ(r.symmetric_beta_consistent, Flag::NotApplicable);
}

TEST(BetaSweep, AsymmetricSourceIsExploratory) {
  auto c = small_config();
  c.source_spec = "bernoulli:0.25,0.75";
  c.beta_grid = {0.2, 0.4, 0.6, 0.8};
  auto r = run_beta_sweep(c);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(std::count_if(r.rows.begin(), r.rows.end(), [](auto& row) { return row.best; }), 1);
  EXPECT_EQ(r.symmetric_beta_consistent, Flag::NotApplicable);
  EXPECT_EQ(r.records.size(), 4u * c.trials);
  std::ostringstream out;
  write_sweep_csv(out, r);
  EXPECT_EQ(parse_csv(out.str()).size(), 5u);
}

TEST(BetaSweep, RequiresGrid) {
  EXPECT_THROW(run_beta_sweep(small_config()), ConfigError);
}

TEST(ConvergenceStudy, SinglePointHasNoTrend) {
  auto c = small_config();
  c.n_grid = {100};
  auto r = run_convergence_study(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.trend, Flag::NotApplicable);
  EXPECT_NEAR(r.rows[0].ratio, r.rows[0].mean_r / std::log(100.0), 1e-15);
}

TEST(ConvergenceStudy, SymmetricBinaryMatchesClosedFormAtEachN) {
  auto c = small_config();
  c.k.reset();
  c.m = 48;
  c.n_grid = {64, 256};
  c.trials = 60;
  auto r = run_convergence_study(c);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.expected_r.has_value());
    EXPECT_EQ(row.closed_form, Flag::Pass) << row.params.n;
  }
}

TEST(ConcentrationStudy, FrequencyMonotoneAndZeroAtDepth) {
  auto c = small_config();
  c.trials = 120;
  c.delta_grid = {0.01, 0.05, 0.1, 0.5, 32.0};
  auto r = run_concentration_study(c);
  ASSERT_EQ(r.rows.size(), 5u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_LE(r.rows[i].frequency, r.rows[i - 1].frequency);
  }
  EXPECT_EQ(r.rows.back().frequency, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(ConcentrationStudy, DefaultGridAndMinimumTrials) {
  auto c = small_config();
  c.trials = 100;
  auto r = run_concentration_study(c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(r.rows[0].delta, 0.4);
  EXPECT_DOUBLE_EQ(r.rows[2].delta, 4.0);
  c.trials = 99;
  EXPECT_THROW(run_concentration_study(c), ConfigError);
}
