#include "ucp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ucp/csv.hpp"
#include "ucp/error.hpp"

namespace ucp::ensemble {

double sigmoid_weight(double normalized_error, double mean_normalized_error, double alpha) {
  if (!(alpha > 0)) throw DomainError("sigmoid scaling alpha must be > 0");
  return 1.0 / (1.0 + std::exp(alpha * (normalized_error - mean_normalized_error)));
}

double combine_weights(double w_mae, double w_mbre, double w_mibre) { return (w_mae + w_mbre + w_mibre) / 3.0; }

double ensemble_predict(std::span<const double> predictions, std::span<const double> weights) {
  if (predictions.size() != weights.size()) throw Error("ensemble_predict: size mismatch");
  if (predictions.empty()) throw Error("ensemble_predict: no predictions");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    num += predictions[i] * weights[i];
    den += weights[i];
  }
  if (!(den > 0)) {
    return std::accumulate(predictions.begin(), predictions.end(), 0.0) / static_cast<double>(predictions.size());
  }
  const double value = num / den;
  // Keep the convex-combination bound exact under rounding.
  const auto [lo, hi] = std::minmax_element(predictions.begin(), predictions.end());
  return std::clamp(value, *lo, *hi);
}

std::array<double, 3> normalize_errors(const std::array<double, 3>& errors) {
  const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
  std::array<double, 3> out{};
  const double span = *hi - *lo;
  if (!(span > 0)) return out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = (errors[i] - *lo) / span;
  return out;
}

ErrorProfile normalize_profile(const std::array<eval::MetricTriple, 3>& raw) {
  ErrorProfile p;
  p.raw = raw;
  const auto mae = normalize_errors({raw[0].mae, raw[1].mae, raw[2].mae});
  const auto mbre = normalize_errors({raw[0].mbre, raw[1].mbre, raw[2].mbre});
  const auto mibre = normalize_errors({raw[0].mibre, raw[1].mibre, raw[2].mibre});
  for (std::size_t i = 0; i < 3; ++i) p.normalized[i] = {mae[i], mbre[i], mibre[i]};
  return p;
}

ErrorProfile inner_error_profile(const Dataset& training, const regress::LearnerConfigs& configs,
                                 double pdr_floor) {
  const std::size_t n = training.size();
  if (n < kMinInnerProjects) {
    ErrorProfile p;
    p.fallback = true;
    return p;
  }
  const auto features = training.features();
  const auto pdrs = training.pdrs();
  const auto efforts = training.efforts();

  std::array<std::vector<double>, 3> estimates;
  for (auto& e : estimates) e.resize(n);
  std::vector<FeatureVector> x;
  std::vector<double> y;
  x.reserve(n - 1);
  y.reserve(n - 1);
  for (std::size_t test = 0; test < n; ++test) {
    x.clear();
    y.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == test) continue;
      x.push_back(features[i]);
      y.push_back(pdrs[i]);
    }
    const double ucp = training[test].ucp();
    for (std::size_t m = 0; m < kMembers.size(); ++m) {
      const auto learner = regress::fit_learner(kMembers[m], x, y, configs);
      const double pdr = std::max(learner.predict(features[test]), pdr_floor);
      estimates[m][test] = pdr * ucp;
    }
  }
  std::array<eval::MetricTriple, 3> raw{};
  for (std::size_t m = 0; m < 3; ++m) raw[m] = eval::evaluate(efforts, estimates[m]);
  return normalize_profile(raw);
}

EnsembleWeights weights_from_profile(const ErrorProfile& profile, double alpha) {
  if (!(alpha > 0)) throw DomainError("sigmoid scaling alpha must be > 0");
  EnsembleWeights out;
  out.alpha = alpha;
  if (profile.fallback) return out;
  const auto& nz = profile.normalized;
  const double mean_mae = (nz[0].mae + nz[1].mae + nz[2].mae) / 3.0;
  const double mean_mbre = (nz[0].mbre + nz[1].mbre + nz[2].mbre) / 3.0;
  const double mean_mibre = (nz[0].mibre + nz[1].mibre + nz[2].mibre) / 3.0;
  for (std::size_t i = 0; i < 3; ++i) {
    auto& w = out.models[i];
    w.w_mae = sigmoid_weight(nz[i].mae, mean_mae, alpha);
    w.w_mbre = sigmoid_weight(nz[i].mbre, mean_mbre, alpha);
    w.w_mibre = sigmoid_weight(nz[i].mibre, mean_mibre, alpha);
    w.w = combine_weights(w.w_mae, w.w_mbre, w.w_mibre);
  }
  return out;
}

void write_weights_csv(const EnsembleWeights& weights, std::ostream& out, bool header) {
  if (header) out << "model,w_mae,w_mbre,w_mibre,w\n";
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& w = weights.models[i];
    out << to_string(kMembers[i]) << ',' << format_double(w.w_mae) << ',' << format_double(w.w_mbre) << ','
        << format_double(w.w_mibre) << ',' << format_double(w.w) << '\n';
  }
}

double karner_predict(double ucp) {
  if (!(ucp > 0)) throw DomainError("Karner estimate needs ucp > 0");
  return kKarnerPdr * ucp;
}

int sw_violation_count(const EnvironmentalAssessment& env) {
  int count = 0;
  for (int f = 1; f <= 6; ++f) count += env.score(f) < 3 ? 1 : 0;
  for (int f = 7; f <= 8; ++f) count += env.score(f) > 3 ? 1 : 0;
  return count;
}

double sw_productivity_for_count(int count) {
  if (count <= 2) return 20.0;
  if (count <= 4) return 28.0;
  return 36.0;
}

double sw_productivity(const EnvironmentalAssessment& env) {
  return sw_productivity_for_count(sw_violation_count(env));
}

}  // namespace ucp::ensemble
