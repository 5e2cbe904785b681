#pragma once

#include <span>

namespace ucp::eval {

// Accuracy of effort estimates: mean absolute error (person-hours), mean
// balanced relative error |e - ê| / min(e, ê) and mean inverse balanced
// relative error |e - ê| / max(e, ê).
struct MetricTriple {
  double mae = 0.0;
  double mbre = 0.0;
  double mibre = 0.0;
  friend bool operator==(const MetricTriple&, const MetricTriple&) = default;
};

double mae(std::span<const double> actual, std::span<const double> estimate);
// Both relative errors require strictly positive actuals and estimates.
double mbre(std::span<const double> actual, std::span<const double> estimate);
double mibre(std::span<const double> actual, std::span<const double> estimate);

MetricTriple evaluate(std::span<const double> actual, std::span<const double> estimate);

}  // namespace ucp::eval
