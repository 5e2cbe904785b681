#pragma once

#include <array>
#include <iosfwd>
#include <span>

#include "ucp/dataset.hpp"
#include "ucp/learners.hpp"
#include "ucp/metrics.hpp"

namespace ucp::ensemble {

inline constexpr double kDefaultAlpha = 15.0;
inline constexpr std::size_t kMinInnerProjects = 4;
inline constexpr double kDefaultPdrFloor = 0.01;

// Base learners in ensemble order.
inline constexpr std::array<ModelKind, 3> kMembers{ModelKind::Svr, ModelKind::Stepwise, ModelKind::Cart};

struct EnsembleConfig {
  double alpha = kDefaultAlpha;
  double pdr_floor = kDefaultPdrFloor;
};

struct ErrorProfile {
  std::array<eval::MetricTriple, 3> raw{};
  std::array<eval::MetricTriple, 3> normalized{};
  // Training set below kMinInnerProjects: no inner validation, equal weights.
  bool fallback = false;
};

struct ModelWeight {
  double w_mae = 0.5;
  double w_mbre = 0.5;
  double w_mibre = 0.5;
  double w = 0.5;
};

struct EnsembleWeights {
  std::array<ModelWeight, 3> models{};
  double alpha = kDefaultAlpha;
};

double sigmoid_weight(double normalized_error, double mean_normalized_error, double alpha);
double combine_weights(double w_mae, double w_mbre, double w_mibre);

// Weighted average; all-zero (or non-positive total) weights fall back to the
// plain mean.
double ensemble_predict(std::span<const double> predictions, std::span<const double> weights);

// Min-max across the three models; all-equal values map to 0.
std::array<double, 3> normalize_errors(const std::array<double, 3>& errors);
ErrorProfile normalize_profile(const std::array<eval::MetricTriple, 3>& raw);

// Leave-one-out inside `training`, scoring each base learner on effort.
ErrorProfile inner_error_profile(const Dataset& training, const regress::LearnerConfigs& configs,
                                 double pdr_floor = kDefaultPdrFloor);

EnsembleWeights weights_from_profile(const ErrorProfile& profile, double alpha);

// `model,w_mae,w_mbre,w_mibre,w`
void write_weights_csv(const EnsembleWeights& weights, std::ostream& out, bool header = true);

inline constexpr double kKarnerPdr = 20.0;

double karner_predict(double ucp);

// E1..E6 scored below 3 plus E7..E8 scored above 3.
int sw_violation_count(const EnvironmentalAssessment& env);
double sw_productivity_for_count(int count);
double sw_productivity(const EnvironmentalAssessment& env);

}  // namespace ucp::ensemble
