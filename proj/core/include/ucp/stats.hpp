#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ucp/dataset.hpp"

namespace ucp::stats {

double mean(std::span<const double> values);
// Sample (n - 1) standard deviation.
double sample_stdev(std::span<const double> values);

// Mean, sample stdev, and the bias-adjusted skewness (G1) and excess
// kurtosis (G2) used by mainstream statistics packages. Shape statistics are
// NaN with the matching flag cleared when stdev is 0 or n is too small
// (G1 needs n >= 3, G2 needs n >= 4).
struct Moments {
  double mean = 0.0;
  double stdev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  bool skewness_defined = false;
  bool kurtosis_defined = false;
};

Moments moments(std::span<const double> values);

// Ranks 1..n with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;
};

// Spearman rank correlation; two-sided p from t = r sqrt((n-2)/(1-r^2)) on
// n - 2 degrees of freedom.
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  bool defined = false;
};

// mean +/- t(0.975, n-1) * s / sqrt(n). Undefined for fewer than 2 values.
ConfidenceInterval ci95_mean(std::span<const double> values);

struct IntervalSummary {
  int level = 0;
  std::size_t count = 0;
  double mean = 0.0;
  ConfidenceInterval ci;
};

// PDR grouped by raw level (0..5) of factor E<factor>; one entry per occupied
// level, ascending.
std::vector<IntervalSummary> interval_plot_data(const Dataset& dataset, int factor);

// Number of projects at each raw level 0..5 of factor E<factor>.
std::array<std::size_t, 6> level_counts(const Dataset& dataset, int factor);

}  // namespace ucp::stats
