#include "ucp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "ucp/error.hpp"

namespace ucp::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_factor(int factor) {
  if (factor < 1 || factor > static_cast<int>(kFactorCount)) {
    throw DomainError("factor index must be in 1..8");
  }
}

}  // namespace

double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stdev(std::span<const double> values) {
  if (values.size() < 2) throw Error("sample stdev needs at least 2 values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Moments moments(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error("moments need at least 2 values");
  Moments out;
  out.mean = mean(values);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double nd = static_cast<double>(n);
  out.stdev = std::sqrt(m2 / (nd - 1.0));
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  out.skewness = kNaN;
  out.kurtosis = kNaN;
  if (!(m2 > 0)) return out;

  if (n >= 3) {
    const double g1 = m3 / std::pow(m2, 1.5);
    out.skewness = std::sqrt(nd * (nd - 1.0)) / (nd - 2.0) * g1;
    out.skewness_defined = true;
  }
  if (n >= 4) {
    const double g2 = m4 / (m2 * m2) - 3.0;
    out.kurtosis = (nd - 1.0) / ((nd - 2.0) * (nd - 3.0)) * ((nd + 1.0) * g2 + 6.0);
    out.kurtosis_defined = true;
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw Error("spearman needs at least 3 pairs");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (!(sxx > 0) || !(syy > 0)) throw Error("spearman: constant input, correlation undefined");

  Correlation out;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(out.r) >= 1.0) {
    out.p_value = 0.0;
    return out;
  }
  const double df = static_cast<double>(n - 2);
  const double t = out.r * std::sqrt(df / (1.0 - out.r * out.r));
  const boost::math::students_t dist(df);
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return out;
}

ConfidenceInterval ci95_mean(std::span<const double> values) {
  ConfidenceInterval ci;
  if (values.size() < 2) {
    if (!values.empty()) ci.low = ci.high = values.front();
    return ci;
  }
  const double m = mean(values);
  const double s = sample_stdev(values);
  const boost::math::students_t dist(static_cast<double>(values.size() - 1));
  const double t = boost::math::quantile(dist, 0.975);
  const double half = t * s / std::sqrt(static_cast<double>(values.size()));
  ci.low = m - half;
  ci.high = m + half;
  ci.defined = true;
  return ci;
}

std::vector<IntervalSummary> interval_plot_data(const Dataset& dataset, int factor) {
  check_factor(factor);
  std::array<std::vector<double>, 6> groups;
  for (const auto& p : dataset) groups[static_cast<std::size_t>(p.env().score(factor))].push_back(p.pdr());
  std::vector<IntervalSummary> out;
  for (int level = kMinScore; level <= kMaxScore; ++level) {
    const auto& g = groups[static_cast<std::size_t>(level)];
    if (g.empty()) continue;
    IntervalSummary s;
    s.level = level;
    s.count = g.size();
    s.mean = mean(g);
    s.ci = ci95_mean(g);
    out.push_back(s);
  }
  return out;
}

std::array<std::size_t, 6> level_counts(const Dataset& dataset, int factor) {
  check_factor(factor);
  std::array<std::size_t, 6> counts{};
  for (const auto& p : dataset) ++counts[static_cast<std::size_t>(p.env().score(factor))];
  return counts;
}

}  // namespace ucp::stats
