#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ucp/dataset.hpp"

namespace ucp::regress {

struct SvrConfig {
  double c = 1.0;
  double epsilon = 0.1;
  // RBF width; nullopt means 1 / (4 * mean per-feature variance).
  std::optional<double> gamma;
  double tol = 1e-3;
  // Kernel cache budget in kernel entries (rows are cached whole, LRU).
  std::size_t cache_entries = 5000;
  std::size_t max_iterations = 10'000'000;
};

// epsilon-SVR with RBF kernel k(x, z) = exp(-gamma |x - z|^2).
// f(x) = sum_i coef_i k(sv_i, x) + bias, coef_i = alpha_i - alpha*_i.
struct SvrModel {
  double gamma = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  double bias = 0.0;
  std::vector<FeatureVector> support_vectors;
  std::vector<double> coefficients;

  // Per training point, in input order. Empty for models loaded from JSON.
  std::vector<double> alpha;
  std::vector<double> alpha_star;
  std::size_t iterations = 0;
  bool converged = true;
  bool bias_only = false;
};

double rbf_kernel(const FeatureVector& a, const FeatureVector& b, double gamma);
double auto_gamma(std::span<const FeatureVector> x);

// Solves the epsilon-insensitive dual by SMO with second-order working-set
// selection; stops once the maximal KKT violation drops below config.tol.
SvrModel svr_fit(std::span<const FeatureVector> x, std::span<const double> y, const SvrConfig& config = {});

double svr_predict(const SvrModel& model, const FeatureVector& x);

}  // namespace ucp::regress
