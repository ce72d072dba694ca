#include "nnentropy/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"
#include "nnentropy/estimators.hpp"
#include "nnentropy/neighbors.hpp"
#include "nnentropy/sources.hpp"
#include "nnentropy/weak_metric.hpp"

namespace nnentropy {
namespace {

// Small deterministic stream for drawing test parameters.
class Draw {
 public:
  explicit Draw(std::uint64_t key) : key_(key) {}
  double uniform() { return rng::uniform(key_, c_++); }
  std::size_t range(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
  }
  std::uint64_t next() { return rng::at(key_, c_++); }

 private:
  std::uint64_t key_;
  std::uint64_t c_ = 0;
};

// Skewed sources produce long shared prefixes and duplicates.
Source random_source(Draw& d, std::size_t alphabet) {
  const double skew = std::array{0.0, 0.6, 0.85, 0.95}[d.range(0, 3)];
  if (skew == 0.0) return BernoulliSource::uniform(alphabet);
  std::vector<double> p(alphabet, (1.0 - skew) / static_cast<double>(alphabet - 1));
  p[0] = skew;
  return BernoulliSource(p);
}

}  // namespace

CheckResult check_oracle_equivalence(std::size_t samples, Seed seed) {
  const std::array families{LambdaFamily::zero(), LambdaFamily::beta(0.3),
                            LambdaFamily::beta(0.5), LambdaFamily::beta(0.9)};
  Draw d(rng::derive(seed.master, 0x6f7261636c65ULL));
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t alphabet = d.range(2, 4);
    const std::size_t count = d.range(4, 128);
    const std::size_t depth = d.range(4, 64);
    const auto& family = families[s % families.size()];
    const Sample smp = sample(random_source(d, alphabet), count, depth, Seed{d.next()});
    const std::size_t k = d.range(1, count - 2);
    const std::array<std::size_t, 2> orders{k, k + 1};
    const auto fast = kmax_alpha_trie(smp, orders, family);
    const auto slow = kmax_alpha_naive_all(smp, orders, family);
    if (!(fast == slow)) {
      return {"oracle_equivalence", false,
              fmt::format("sample {}: |A|={} n+1={} m={} k={} {} differs", s, alphabet, count,
                          depth, k, family.descriptor())};
    }
  }
  return {"oracle_equivalence", true, fmt::format("{} samples identical", samples)};
}

CheckResult check_metric_properties(std::size_t pairs, std::size_t grid_points, Seed seed) {
  Draw d(rng::derive(seed.master, 0x6d6574726963ULL));
  std::vector<LambdaFamily> families{LambdaFamily::zero(),
                                     LambdaFamily::tabulated({{0, 0}, {0.5, 0.2}, {2, 0.9}, {4, 1}})};
  for (int i = 0; i < 4; ++i) families.push_back(LambdaFamily::beta(0.02 + 0.96 * d.uniform()));
  const CheckResult fail{"metric_properties", false, {}};

  for (const auto& f : families) {
    if (f(0.0) != 0.0) return {fail.name, false, f.descriptor() + ": lambda(0) != 0"};
    double prev = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
      const double t = 50.0 * static_cast<double>(g) / static_cast<double>(grid_points - 1);
      const double v = f(t);
      if (v < prev || v > 1.0 || v < 0.0) {
        return {fail.name, false, fmt::format("{}: lambda invalid at t={}", f.descriptor(), t)};
      }
      prev = v;
    }
  }

  for (std::size_t it = 0; it < pairs; ++it) {
    const std::size_t alphabet = d.range(2, 4);
    const std::size_t m = d.range(1, 40);
    // y copies x up to a random point, then mutates at a random rate.
    std::vector<Symbol> x(m + 1), y(m + 1);
    const std::size_t split = d.range(0, m + 1);
    const double rate = d.uniform();
    for (std::size_t j = 0; j <= m; ++j) {
      x[j] = static_cast<Symbol>(d.range(0, alphabet - 1));
      y[j] = x[j];
      if (j >= split && (j == split || d.uniform() < rate)) {
        y[j] = static_cast<Symbol>((x[j] + d.range(1, alphabet - 1)) % alphabet);
      }
    }
    const SymbolView xs(x.data(), m), ys(y.data(), m);
    const SymbolView xl(x), yl(y);
    const auto p = static_cast<double>(first_mismatch_index(xs, ys));
    for (const auto& f : families) {
      const double a = alpha(xs, ys, f);
      auto bad = [&](const char* what) {
        return CheckResult{fail.name, false, fmt::format("pair {} {}: {}", it, f.descriptor(), what)};
      };
      if (a < p - 1.0 || a > p) return bad("outside [p-1, p]");
      if (a != alpha(ys, xs, f)) return bad("not symmetric");
      if (alpha(xl, yl, f) < a) return bad("decreased with depth");
      // Prepending a coordinate applies exactly one more fold step.
      const double tail = alpha(xl.subspan(1), yl.subspan(1), f);
      const double expect = x[0] == y[0] ? tail + 1.0 : f(tail);
      if (alpha(xl, yl, f) != expect) return bad("one-step extension rule broken");
    }
  }
  return {"metric_properties", true,
          fmt::format("{} pairs x {} families, {}-point lambda grid", pairs, families.size(),
                      grid_points)};
}

CheckResult check_beta_fixed_point(double beta) {
  const auto f = LambdaFamily::beta(beta);
  auto F = [beta](double t) {
    if (std::isinf(t)) return 0.0;
    return t <= 0.0 ? 1.0 : std::pow(beta, t);
  };
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double t = i / 10.0;
    const double lhs = beta * F(t - 1.0) + (1.0 - beta) * F(f.inverse(t));
    worst = std::max(worst, std::abs(lhs - F(t)));
  }
  return {"beta_fixed_point", worst <= 1e-10, fmt::format("max residual {:.3g}", worst)};
}

bool run_validation(std::ostream& out, Seed seed) {
  std::vector<CheckResult> results;
  auto expect = [&](std::string name, bool ok, std::string detail = {}) {
    results.push_back({std::move(name), ok, std::move(detail)});
  };
  auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

  try {
    const Alphabet bin(2);
    const SymbolSequence s000({0, 0, 0}, bin), s001({0, 0, 1}, bin), s111({1, 1, 1}, bin);
    expect("first_mismatch_index", first_mismatch_index(s000, s001) == 3 &&
                                       first_mismatch_index(SymbolSequence({0, 1}, bin),
                                                            SymbolSequence({0, 1}, bin)) == 2 &&
                                       first_mismatch_index(SymbolSequence({1, 0, 0}, bin), s000) == 1);
    const auto half = LambdaFamily::beta(0.5);
    expect("lambda_eval", half(0.0) == 0.0 && near(half(1.0), 0.4150374992788438, 1e-12) &&
                              LambdaFamily::zero()(7.3) == 0.0 && half(60.0) > 1.0 - 1e-15);
    const SymbolSequence a01({0, 1}, bin), a11({1, 1}, bin);
    expect("alpha", alpha(s000, s001, LambdaFamily::zero()) == 2.0 &&
                        alpha(s000, s000, half) == 3.0 &&
                        near(alpha(a01, a11, half), 0.4150374992788438, 1e-12) &&
                        near(rho(a01, a11, half), 0.660315518884943, 1e-12));

    const Sample tiny({s000, s001, s111}, bin);
    const auto rep = eta_estimator(tiny, 1, LambdaFamily::zero());
    expect("eta_worked_example", near(rep.r_k, 4.0 / 3.0, 1e-15) && rep.r_k_plus_1 == 0.0 &&
                                     near(rep.eta, 4.0 / 3.0, 1e-15));

    expect("closed_forms",
           near(harmonic(3), 11.0 / 6.0, 1e-15) &&
               near(expected_r_symmetric(1, 1, 2), 1.0 / std::log(2.0), 1e-15) &&
               near(variance_bound(99, 2, 10), 110.25, 1e-12) &&
               near(mcdiarmid_tail(99, 1, 1, 1.0), 2.0 * std::exp(-50.0), 1e-30) &&
               truncation_depth(2, 1.0, 1.0) == 1);

    const MarkovSource chain({{0.9, 0.1}, {0.5, 0.5}});
    const auto pi = stationary_distribution(chain);
    expect("markov_entropy", near(pi[0], 5.0 / 6.0, 1e-12) &&
                                 near(true_entropy(chain), 0.38642700791953105, 1e-12));

    const Source fair = BernoulliSource::uniform(2);
    const auto s1 = sample(fair, 20, 16, Seed{7});
    const auto s2 = sample(fair, 40, 16, Seed{7});
    expect("sampling_reproducible",
           std::equal(s1.flat().begin(), s1.flat().end(), s2.flat().begin()));
  } catch (const std::exception& e) {
    expect("worked_examples", false, e.what());
  }

  results.push_back(check_metric_properties(2000, 1000, seed));
  results.push_back(check_beta_fixed_point(0.5));
  results.push_back(check_oracle_equivalence(40, seed));

  bool ok = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << '\n';
    ok = ok && r.passed;
  }
  return ok;
}

}  // namespace nnentropy
