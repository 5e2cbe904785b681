#include "ucp/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ucp/error.hpp"

namespace ucp::eval {

namespace {

void check(std::span<const double> actual, std::span<const double> estimate) {
  if (actual.size() != estimate.size()) throw Error("metric: length mismatch");
  if (actual.empty()) throw Error("metric: empty input");
}

void check_positive(std::span<const double> actual, std::span<const double> estimate) {
  check(actual, estimate);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!(actual[i] > 0)) throw DomainError("relative error needs actual effort > 0");
    if (!(estimate[i] > 0)) throw DomainError("relative error needs estimated effort > 0");
  }
}

}  // namespace

double mae(std::span<const double> actual, std::span<const double> estimate) {
  check(actual, estimate);
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += std::abs(actual[i] - estimate[i]);
  return s / static_cast<double>(actual.size());
}

double mbre(std::span<const double> actual, std::span<const double> estimate) {
  check_positive(actual, estimate);
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    s += std::abs(actual[i] - estimate[i]) / std::min(actual[i], estimate[i]);
  }
  return s / static_cast<double>(actual.size());
}

double mibre(std::span<const double> actual, std::span<const double> estimate) {
  check_positive(actual, estimate);
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    s += std::abs(actual[i] - estimate[i]) / std::max(actual[i], estimate[i]);
  }
  return s / static_cast<double>(actual.size());
}

MetricTriple evaluate(std::span<const double> actual, std::span<const double> estimate) {
  return {mae(actual, estimate), mbre(actual, estimate), mibre(actual, estimate)};
}

}  // namespace ucp::eval
