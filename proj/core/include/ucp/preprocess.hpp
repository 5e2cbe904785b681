#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucp/dataset.hpp"
#include "ucp/error.hpp"

namespace ucp::preprocess {

enum class Feature { Effort, Ucp, Uaw, Uucw, Tcf, Ef, Pdr };

std::string_view to_string(Feature feature);
double value_of(const Project& project, Feature feature);

// Size/effort columns with the heavy tails: effort, ucp, uaw, uucw, pdr.
std::vector<Feature> default_outlier_features();

inline constexpr double kDefaultZThreshold = 3.0;

struct OutlierReport {
  std::vector<Feature> features;
  double threshold = kDefaultZThreshold;
  std::vector<std::string> ids;
  // z[i][j]: z-score of project i on features[j]; 0 for skipped (constant) features.
  std::vector<std::vector<double>> z;
  std::vector<bool> flagged;

  double max_abs_z(std::size_t project) const;
  std::vector<std::string> removed_ids() const;
  std::size_t flagged_count() const;
};

// z = (x - mean) / sample stdev per feature; a project is flagged when any
// |z| > threshold. Zero-variance features never flag.
OutlierReport zscore_outliers(const Dataset& dataset, std::span<const Feature> features,
                              double threshold = kDefaultZThreshold);

Dataset remove_outliers(const Dataset& dataset, const OutlierReport& report);

// `id,flagged,max_abs_z`
void write_outlier_csv(const OutlierReport& report, std::ostream& out);

// Per-feature [min, max] learned on training values.
class ScalerParams {
 public:
  struct Range {
    double min = 0.0;
    double max = 0.0;
  };

  ScalerParams() = default;
  explicit ScalerParams(std::vector<Range> ranges);

  std::size_t dimension() const noexcept { return ranges_.size(); }
  const std::vector<Range>& ranges() const noexcept { return ranges_; }

  // (x - min) / (max - min), or 0 when the span is degenerate. Unseen values
  // may land outside [0, 1].
  double apply(std::size_t feature, double x) const;

  template <std::size_t D>
  std::array<double, D> apply(const std::array<double, D>& row) const {
    std::array<double, D> out{};
    for (std::size_t j = 0; j < D; ++j) out[j] = apply(j, row[j]);
    return out;
  }

  friend bool operator==(const ScalerParams& a, const ScalerParams& b) {
    if (a.ranges_.size() != b.ranges_.size()) return false;
    for (std::size_t i = 0; i < a.ranges_.size(); ++i) {
      if (a.ranges_[i].min != b.ranges_[i].min || a.ranges_[i].max != b.ranges_[i].max) return false;
    }
    return true;
  }

 private:
  std::vector<Range> ranges_;
};

ScalerParams minmax_fit(std::span<const double> values);
std::vector<double> minmax_apply(const ScalerParams& params, std::span<const double> values);

template <std::size_t D>
ScalerParams minmax_fit(std::span<const std::array<double, D>> rows) {
  if (rows.empty()) throw Error("minmax_fit: no rows");
  std::vector<ScalerParams::Range> ranges(D);
  for (std::size_t j = 0; j < D; ++j) ranges[j] = {rows.front()[j], rows.front()[j]};
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < D; ++j) {
      if (row[j] < ranges[j].min) ranges[j].min = row[j];
      if (row[j] > ranges[j].max) ranges[j].max = row[j];
    }
  }
  return ScalerParams(std::move(ranges));
}

template <std::size_t D>
std::vector<std::array<double, D>> minmax_apply(const ScalerParams& params,
                                                std::span<const std::array<double, D>> rows) {
  std::vector<std::array<double, D>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(params.apply(row));
  return out;
}

struct NormalityResult {
  bool is_normal = false;
  double statistic = 1.0;
  double critical_value = 0.0;
};

// Kolmogorov-Smirnov against N(sample mean, sample stdev) with Lilliefors
// critical values (parameters estimated from the same sample). alpha must
// lie in [0.01, 0.15].
NormalityResult normality_check(std::span<const double> values, double alpha = 0.05);

std::vector<double> log_transform(std::span<const double> values);

}  // namespace ucp::preprocess
