#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nnentropy/sequence.hpp"

namespace nnentropy {

// The mismatch map lambda of the weak metric: nondecreasing on [0, inf),
// lambda(0) = 0, lambda <= 1. Validity is enforced at construction.
class LambdaFamily {
 public:
  struct Zero {};
  struct Beta {
    double beta;
  };
  struct Tabulated {
    std::vector<std::pair<double, double>> breakpoints;  // (t, lambda(t))
  };
  using Variant = std::variant<Zero, Beta, Tabulated>;

  static LambdaFamily zero() { return LambdaFamily(Zero{}); }
  // lambda(t) = log_beta(beta + (1 - beta) beta^t), beta in (0, 1).
  static LambdaFamily beta(double beta);
  // Piecewise linear through the breakpoints, constant after the last one.
  // Breakpoints must start at (0, 0), be strictly increasing in t and
  // nondecreasing in value, with every value <= 1.
  static LambdaFamily tabulated(std::vector<std::pair<double, double>> breakpoints);

  // lambda(t); t must be >= 0.
  double operator()(double t) const;

  // lambda^{-1}(u) in closed form, Beta family only. Returns +inf for u >= 1.
  double inverse(double u) const;

  const Variant& variant() const noexcept { return v_; }
  bool is_zero() const noexcept { return std::holds_alternative<Zero>(v_); }
  // "zero", "beta:<value>" or "table:<breakpoint count>".
  std::string descriptor() const;

 private:
  explicit LambdaFamily(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double lambda_eval(const LambdaFamily& family, double t);

// alpha^(m)(x, y) = -log rho^(m)(x, y). Folds the truncated-metric recursion
// from coordinate m down to 1: t <- t + 1 on a match, t <- lambda(t) on a
// mismatch, starting from t = 0. Always in [0, m].
double alpha(SymbolView x, SymbolView y, const LambdaFamily& family);

// exp(-alpha(x, y, family)), in [e^-m, 1].
double rho(SymbolView x, SymbolView y, const LambdaFamily& family);

}  // namespace nnentropy
