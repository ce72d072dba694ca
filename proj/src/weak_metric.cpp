#include "nnentropy/weak_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nnentropy/errors.hpp"

namespace nnentropy {
namespace {

double beta_lambda(double beta, double t) {
  double v = std::log(beta + (1.0 - beta) * std::pow(beta, t)) / std::log(beta);
  return std::clamp(v, 0.0, 1.0);
}

double tabulated_lambda(const std::vector<std::pair<double, double>>& bp, double t) {
  if (t >= bp.back().first) return bp.back().second;
  auto hi = std::upper_bound(bp.begin(), bp.end(), t,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

// Fold with the variant dispatch hoisted out of the coordinate loop.
template <typename Lambda>
double fold(SymbolView x, SymbolView y, Lambda&& lambda) {
  double t = 0.0;
  for (std::size_t j = x.size(); j-- > 0;) {
    t = (x[j] == y[j]) ? t + 1.0 : lambda(t);
  }
  return t;
}

}  // namespace

LambdaFamily LambdaFamily::beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidInput(fmt::format("beta must lie in (0, 1), got {}", beta));
  }
  return LambdaFamily(Beta{beta});
}

LambdaFamily LambdaFamily::tabulated(std::vector<std::pair<double, double>> bp) {
  if (bp.empty() || bp.front().first != 0.0 || bp.front().second != 0.0) {
    throw InvalidInput("tabulated lambda must start at (0, 0)");
  }
  for (std::size_t i = 1; i < bp.size(); ++i) {
    if (!(bp[i].first > bp[i - 1].first)) {
      throw InvalidInput(fmt::format("breakpoint {}: t must be strictly increasing", i));
    }
    if (!(bp[i].second >= bp[i - 1].second)) {
      throw InvalidInput(fmt::format("breakpoint {}: lambda must be nondecreasing", i));
    }
    if (!(bp[i].second <= 1.0)) {
      throw InvalidInput(fmt::format("breakpoint {}: lambda must be <= 1", i));
    }
  }
  return LambdaFamily(Tabulated{std::move(bp)});
}

double LambdaFamily::operator()(double t) const {
  if (!(t >= 0.0)) throw InvalidInput(fmt::format("lambda argument must be >= 0, got {}", t));
  return std::visit(
      [t](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<F, Beta>) {
          return beta_lambda(f.beta, t);
        } else {
          return tabulated_lambda(f.breakpoints, t);
        }
      },
      v_);
}

double LambdaFamily::inverse(double u) const {
  const auto* b = std::get_if<Beta>(&v_);
  if (!b) throw InvalidInput("closed-form inverse exists only for the beta family");
  if (!(u >= 0.0)) throw InvalidInput("lambda inverse argument must be >= 0");
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  const double beta = b->beta;
  return std::log((std::pow(beta, u) - beta) / (1.0 - beta)) / std::log(beta);
}

std::string LambdaFamily::descriptor() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Zero>) {
          return "zero";
        } else if constexpr (std::is_same_v<F, Beta>) {
          return fmt::format("beta:{}", f.beta);
        } else {
          return fmt::format("table:{}", f.breakpoints.size());
        }
      },
      v_);
}

double lambda_eval(const LambdaFamily& family, double t) { return family(t); }

double alpha(SymbolView x, SymbolView y, const LambdaFamily& family) {
  if (x.size() != y.size()) throw InvalidInput("sequences differ in length");
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LambdaFamily::Zero>) {
          // Mismatches reset the accumulator, so only the common prefix counts.
          auto [ix, iy] = std::mismatch(x.begin(), x.end(), y.begin());
          return static_cast<double>(ix - x.begin());
        } else if constexpr (std::is_same_v<F, LambdaFamily::Beta>) {
          const double beta = f.beta;
          return fold(x, y, [beta](double t) { return beta_lambda(beta, t); });
        } else {
          return fold(x, y, [&f](double t) { return tabulated_lambda(f.breakpoints, t); });
        }
      },
      family.variant());
}

double rho(SymbolView x, SymbolView y, const LambdaFamily& family) {
  return std::exp(-alpha(x, y, family));
}

}  // namespace nnentropy
