#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ucp/dataset.hpp"

namespace ucp::regress {

struct StepwiseConfig {
  double alpha_remove = 0.05;
  // Log-transform features that fail the normality check (when positive).
  bool log_non_normal = true;
  double normality_alpha = 0.05;
};

struct StepwiseModel {
  std::array<bool, 4> log_feature{};  // transform applied to each raw feature
  std::vector<std::size_t> retained;  // feature indices, ascending
  std::vector<double> coefficients;   // aligned with `retained`
  std::vector<double> p_values;       // of the final fit, aligned with `retained`
  double intercept = 0.0;
  std::vector<std::size_t> removed;   // in removal order
  std::size_t n = 0;
};

// Backward elimination OLS: start from all four (possibly log-transformed)
// features, drop the feature with the largest coefficient p-value while it
// exceeds alpha_remove, refit after each removal. The intercept always stays.
StepwiseModel stepwise_fit(std::span<const FeatureVector> x, std::span<const double> y,
                           const StepwiseConfig& config = {});

// Throws DomainError when a log-transformed component is non-positive.
double stepwise_predict(const StepwiseModel& model, const FeatureVector& x);

// Ordinary least squares with an intercept column. Exposed for tests and
// diagnostics. Residual variance is floored at (sqrt(eps) * max|y|)^2 so
// exact fits keep finite t statistics.
struct OlsFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::vector<double> p_values;
  std::size_t rank = 0;
};
OlsFit ols_fit(const std::vector<std::vector<double>>& columns, std::span<const double> y);

}  // namespace ucp::regress
