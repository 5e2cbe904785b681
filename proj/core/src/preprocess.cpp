#include "ucp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ucp/csv.hpp"
#include "ucp/error.hpp"

namespace ucp::preprocess {

std::string_view to_string(Feature feature) {
  switch (feature) {
    case Feature::Effort: return "effort";
    case Feature::Ucp: return "ucp";
    case Feature::Uaw: return "uaw";
    case Feature::Uucw: return "uucw";
    case Feature::Tcf: return "tcf";
    case Feature::Ef: return "ef";
    case Feature::Pdr: return "pdr";
  }
  return "?";
}

double value_of(const Project& project, Feature feature) {
  switch (feature) {
    case Feature::Effort: return project.effort();
    case Feature::Ucp: return project.ucp();
    case Feature::Uaw: return project.uaw();
    case Feature::Uucw: return project.uucw();
    case Feature::Tcf: return project.tcf();
    case Feature::Ef: return project.ef();
    case Feature::Pdr: return project.pdr();
  }
  return 0.0;
}

std::vector<Feature> default_outlier_features() {
  return {Feature::Effort, Feature::Ucp, Feature::Uaw, Feature::Uucw, Feature::Pdr};
}

double OutlierReport::max_abs_z(std::size_t project) const {
  double m = 0.0;
  for (double v : z.at(project)) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::string> OutlierReport::removed_ids() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (flagged[i]) out.push_back(ids[i]);
  }
  return out;
}

std::size_t OutlierReport::flagged_count() const {
  return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), true));
}

OutlierReport zscore_outliers(const Dataset& dataset, std::span<const Feature> features,
                              double threshold) {
  if (dataset.size() < 3) throw Error("z-score outlier screening needs at least 3 projects");
  if (!(threshold > 0)) throw DomainError("z-score threshold must be > 0");

  const std::size_t n = dataset.size();
  OutlierReport report;
  report.features.assign(features.begin(), features.end());
  report.threshold = threshold;
  report.z.assign(n, std::vector<double>(features.size(), 0.0));
  report.flagged.assign(n, false);
  for (const auto& p : dataset) report.ids.push_back(p.id());

  for (std::size_t j = 0; j < features.size(); ++j) {
    double mean = 0.0;
    for (const auto& p : dataset) mean += value_of(p, features[j]);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& p : dataset) {
      const double d = value_of(p, features[j]) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (value_of(dataset[i], features[j]) - mean) / sd;
      report.z[i][j] = z;
      if (std::abs(z) > threshold) report.flagged[i] = true;
    }
  }
  return report;
}

Dataset remove_outliers(const Dataset& dataset, const OutlierReport& report) {
  if (report.ids.size() != dataset.size()) {
    throw Error("outlier report was produced from a different dataset");
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].id() != report.ids[i]) {
      throw Error("outlier report was produced from a different dataset");
    }
    if (!report.flagged[i]) keep.push_back(i);
  }
  if (keep.empty()) throw Error("outlier removal would leave an empty dataset");
  return dataset.subset(keep);
}

void write_outlier_csv(const OutlierReport& report, std::ostream& out) {
  out << "id,flagged,max_abs_z\n";
  for (std::size_t i = 0; i < report.ids.size(); ++i) {
    out << report.ids[i] << ',' << (report.flagged[i] ? "true" : "false") << ','
        << format_double(report.max_abs_z(i)) << '\n';
  }
}

ScalerParams::ScalerParams(std::vector<Range> ranges) : ranges_(std::move(ranges)) {
  for (const auto& r : ranges_) {
    if (!(r.max >= r.min)) throw DomainError("scaler range with max < min");
  }
}

double ScalerParams::apply(std::size_t feature, double x) const {
  const Range& r = ranges_.at(feature);
  const double span = r.max - r.min;
  if (!(span > 0)) return 0.0;
  return (x - r.min) / span;
}

ScalerParams minmax_fit(std::span<const double> values) {
  if (values.empty()) throw Error("minmax_fit: no values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return ScalerParams({{*lo, *hi}});
}

std::vector<double> minmax_apply(const ScalerParams& params, std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(params.apply(0, v));
  return out;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Critical values of the modified statistic D * (sqrt(n) - 0.01 + 0.85 / sqrt(n))
// for normality with estimated mean and variance (Stephens 1974, as tabulated
// in D'Agostino & Stephens, Goodness-of-Fit Techniques, table 4.7).
struct ModifiedCritical {
  double alpha;
  double value;
};
constexpr std::array<ModifiedCritical, 5> kLillieforsTable{{
    {0.15, 0.775}, {0.10, 0.819}, {0.05, 0.895}, {0.025, 0.955}, {0.01, 1.035}}};

double modified_critical_value(double alpha) {
  if (alpha > kLillieforsTable.front().alpha || alpha < kLillieforsTable.back().alpha) {
    throw DomainError("normality alpha must lie in [0.01, 0.15]");
  }
  for (std::size_t i = 0; i + 1 < kLillieforsTable.size(); ++i) {
    const auto& a = kLillieforsTable[i];
    const auto& b = kLillieforsTable[i + 1];
    if (alpha <= a.alpha && alpha >= b.alpha) {
      // linear in log(alpha)
      const double t = (std::log(a.alpha) - std::log(alpha)) / (std::log(a.alpha) - std::log(b.alpha));
      return a.value + t * (b.value - a.value);
    }
  }
  return kLillieforsTable.back().value;
}

}  // namespace

NormalityResult normality_check(std::span<const double> values, double alpha) {
  const std::size_t n = values.size();
  if (n < 5) throw Error("normality check needs at least 5 values");
  const double root_n = std::sqrt(static_cast<double>(n));
  NormalityResult result;
  result.critical_value = modified_critical_value(alpha) / (root_n - 0.01 + 0.85 / root_n);

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0)) {
    result.statistic = 1.0;
    result.is_normal = false;
    return result;
  }

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf((sorted[i] - mean) / sd);
    const double upper = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lower = f - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, upper, lower});
  }
  result.statistic = d;
  result.is_normal = d <= result.critical_value;
  return result;
}

std::vector<double> log_transform(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (!(v > 0)) throw DomainError("log transform of non-positive value");
    out.push_back(std::log(v));
  }
  return out;
}

}  // namespace ucp::preprocess
