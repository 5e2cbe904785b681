#include "ucp/stepwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "ucp/error.hpp"
#include "ucp/preprocess.hpp"

namespace ucp::regress {

namespace {

Eigen::MatrixXd design(const std::vector<std::vector<double>>& columns, std::size_t n) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns.size() + 1));
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = columns[j][i];
    }
  }
  return a;
}

std::size_t design_rank(const Eigen::MatrixXd& a) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

// Variance inflation of column j against the others (with intercept).
// Constant columns count as infinitely inflated.
double variance_inflation(const std::vector<std::vector<double>>& columns, std::size_t j) {
  const auto& target = columns[j];
  const std::size_t n = target.size();
  const double mean = std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(n);
  double tss = 0.0;
  for (double v : target) tss += (v - mean) * (v - mean);
  if (!(tss > 0)) return std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> others;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k != j) others.push_back(columns[k]);
  }
  const Eigen::MatrixXd a = design(others, n);
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(b);
  const double rss = (b - a * beta).squaredNorm();
  if (!(rss > tss * 1e-12)) return std::numeric_limits<double>::infinity();
  return tss / rss;
}

}  // namespace

OlsFit ols_fit(const std::vector<std::vector<double>>& columns, std::span<const double> y) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size() + 1;
  if (n <= p) throw Error("OLS needs more observations than parameters");
  const Eigen::MatrixXd a = design(columns, n);
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  OlsFit fit;
  fit.rank = static_cast<std::size_t>(qr.rank());
  if (fit.rank < p) throw Error("OLS design is rank deficient");
  const Eigen::VectorXd beta = qr.solve(b);

  const double df = static_cast<double>(n - p);
  double max_abs_y = 0.0;
  for (double v : y) max_abs_y = std::max(max_abs_y, std::abs(v));
  const double floor_sd = std::sqrt(std::numeric_limits<double>::epsilon()) * max_abs_y;
  const double rss = (b - a * beta).squaredNorm();
  const double sigma2 = std::max(rss / df, floor_sd * floor_sd);

  // (A^T A)^{-1} = R^{-1} R^{-T} in the pivoted basis.
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
                                .triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                                        static_cast<Eigen::Index>(p)));
  const Eigen::MatrixXd cov_pivoted = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd cov = perm * cov_pivoted * perm.transpose();

  const boost::math::students_t dist(df);
  fit.intercept = beta(0);
  for (std::size_t j = 1; j < p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double coef = beta(jj);
    const double se = std::sqrt(sigma2 * cov(jj, jj));
    fit.coefficients.push_back(coef);
    double pv = 1.0;
    if (se > 0) {
      const double t = std::abs(coef / se);
      pv = std::isfinite(t) ? 2.0 * boost::math::cdf(boost::math::complement(dist, t)) : 0.0;
    }
    fit.p_values.push_back(pv);
  }
  return fit;
}

StepwiseModel stepwise_fit(std::span<const FeatureVector> x, std::span<const double> y,
                           const StepwiseConfig& config) {
  if (x.size() != y.size()) throw Error("stepwise_fit: feature/target size mismatch");
  constexpr std::size_t kFeatures = FeatureVector{}.size();
  if (x.size() < kFeatures + 2) throw Error("stepwise_fit: needs at least 6 observations");
  const std::size_t n = x.size();

  StepwiseModel model;
  model.n = n;
  std::vector<std::vector<double>> transformed(kFeatures, std::vector<double>(n));
  for (std::size_t f = 0; f < kFeatures; ++f) {
    for (std::size_t i = 0; i < n; ++i) transformed[f][i] = x[i][f];
    if (!config.log_non_normal) continue;
    const bool positive = std::all_of(transformed[f].begin(), transformed[f].end(), [](double v) { return v > 0; });
    if (!positive) continue;
    if (!preprocess::normality_check(transformed[f], config.normality_alpha).is_normal) {
      transformed[f] = preprocess::log_transform(transformed[f]);
      model.log_feature[f] = true;
    }
  }

  std::vector<std::size_t> active(kFeatures);
  std::iota(active.begin(), active.end(), 0);
  auto columns_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::vector<double>> cols;
    for (std::size_t f : idx) cols.push_back(transformed[f]);
    return cols;
  };

  // Collinearity first: drop the most inflated feature until full rank.
  while (!active.empty()) {
    const auto cols = columns_of(active);
    if (design_rank(design(cols, n)) == active.size() + 1) break;
    std::size_t worst = 0;
    double worst_vif = -1.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double vif = variance_inflation(cols, k);
      if (vif > worst_vif) {
        worst_vif = vif;
        worst = k;
      }
    }
    model.removed.push_back(active[worst]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
  }

  OlsFit fit;
  while (!active.empty()) {
    fit = ols_fit(columns_of(active), y);
    const auto worst = std::max_element(fit.p_values.begin(), fit.p_values.end());
    if (*worst <= config.alpha_remove) break;
    const auto k = static_cast<std::size_t>(worst - fit.p_values.begin());
    model.removed.push_back(active[k]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
  }

  if (active.empty()) {
    model.intercept = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    return model;
  }
  model.retained = active;
  model.coefficients = fit.coefficients;
  model.p_values = fit.p_values;
  model.intercept = fit.intercept;
  return model;
}

double stepwise_predict(const StepwiseModel& model, const FeatureVector& x) {
  double out = model.intercept;
  for (std::size_t k = 0; k < model.retained.size(); ++k) {
    const std::size_t f = model.retained[k];
    double v = x[f];
    if (model.log_feature[f]) {
      if (!(v > 0)) throw DomainError("stepwise_predict: log-transformed feature is non-positive");
      v = std::log(v);
    }
    out += model.coefficients[k] * v;
  }
  return out;
}

}  // namespace ucp::regress
