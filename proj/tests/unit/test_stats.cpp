#include <cmath>
#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "ucp/error.hpp"
#include "ucp/stats.hpp"

using namespace ucp;
using namespace ucp::stats;

TEST_CASE("moments") {
  const auto m = moments(std::vector<double>{1, 2, 3});
  CHECK(m.mean == 2);
  CHECK(m.stdev == 1);
  CHECK(m.skewness_defined);
  CHECK(m.skewness == doctest::Approx(0));
  const auto c = moments(std::vector<double>{5, 5, 5});
  CHECK(c.stdev == 0);
  CHECK_FALSE(c.skewness_defined);
  CHECK_FALSE(c.kurtosis_defined);
  CHECK(std::isnan(c.skewness));
  CHECK_THROWS(moments(std::vector<double>{1}));
}

TEST_CASE("moments agree with the adjusted estimators") {
  // Reference values: pandas Series.skew() / Series.kurt() on this sample.
  const std::vector<double> x{2, 8, 0, 4, 1, 9, 9, 0};
  const auto m = moments(x);
  CHECK(m.mean == doctest::Approx(4.125));
  CHECK(m.stdev == doctest::Approx(3.9798600118956085));
  CHECK(m.skewness == doctest::Approx(0.3305821804079747).epsilon(1e-9));
  CHECK(m.kurtosis == doctest::Approx(-2.098602258096087).epsilon(1e-9));
}

TEST_CASE("shape statistics are affine invariant") {
  std::mt19937 rng(4);
  std::gamma_distribution<double> g(2.0, 1.0);
  std::vector<double> x(200), y(200);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g(rng);
    y[i] = 7.5 * x[i] - 3;
  }
  const auto a = moments(x);
  const auto b = moments(y);
  CHECK(b.mean == doctest::Approx(7.5 * a.mean - 3));
  CHECK(b.stdev == doctest::Approx(7.5 * a.stdev));
  CHECK(b.skewness == doctest::Approx(a.skewness).epsilon(1e-9));
  CHECK(b.kurtosis == doctest::Approx(a.kurtosis).epsilon(1e-9));
}

TEST_CASE("spearman") {
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}).r == doctest::Approx(1));
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{30, 20, 10}).r == doctest::Approx(-1));
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{30, 20, 10}).p_value == 0);
  // Reference: scipy.stats.spearmanr
  const auto c = spearman(std::vector<double>{1, 2, 3, 4, 5, 6, 7}, std::vector<double>{2, 1, 4, 3, 7, 5, 6});
  CHECK(c.r == doctest::Approx(0.8214285714285715).epsilon(1e-12));
  CHECK(c.p_value == doctest::Approx(0.023448808345691505).epsilon(1e-9));
  CHECK_THROWS(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}));
  CHECK_THROWS(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("spearman handles ties with average ranks") {
  CHECK(average_ranks(std::vector<double>{10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});
}

TEST_CASE("spearman is rank invariant") {
  std::mt19937 rng(8);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> x(40), y(40), fx(40), gy(40);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = n(rng);
    y[i] = x[i] + n(rng);
    fx[i] = std::exp(x[i]);
    gy[i] = y[i] * y[i] * y[i] + 4;
  }
  const auto a = spearman(x, y);
  const auto b = spearman(fx, gy);
  CHECK(a.r == doctest::Approx(b.r).epsilon(1e-12));
  CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
}

TEST_CASE("95% confidence interval for the mean") {
  const auto z = ci95_mean(std::vector<double>{10, 10, 10, 10});
  CHECK(z.defined);
  CHECK(z.low == 10);
  CHECK(z.high == 10);
  const auto ci = ci95_mean(std::vector<double>{1, 2, 3, 4, 5});
  // oracle: t(0.975, 4) = 2.7764 from tables, sd = sqrt(2.5)
  const double half = 2.7764451051977987 * std::sqrt(2.5) / std::sqrt(5.0);
  CHECK(ci.low == doctest::Approx(3 - half).epsilon(1e-10));
  CHECK(ci.high == doctest::Approx(3 + half).epsilon(1e-10));
  CHECK(ci.low == doctest::Approx(1.0368).epsilon(1e-4));
  CHECK_FALSE(ci95_mean(std::vector<double>{4}).defined);
}

TEST_CASE("interval plot data groups PDR by raw level") {
  // e5 drives PDR down level by level
  std::vector<Project> ps;
  int id = 0;
  for (int level = 1; level <= 5; ++level) {
    for (int k = 0; k < 3; ++k) {
      const double pdr = 40 - 5 * level + k;
      ps.push_back(fixtures::project("p" + std::to_string(id++), 10, 90, 1, 1, {3, 3, 3, 3, level, 3, 3, 3}, pdr * 100));
    }
  }
  ps.push_back(fixtures::project("single", 10, 90, 1, 1, {3, 3, 3, 3, 0, 3, 3, 3}, 5000));
  const Dataset d("rq", ps);
  const auto s = interval_plot_data(d, 5);
  REQUIRE(s.size() == 6);
  CHECK(s[0].level == 0);
  CHECK(s[0].count == 1);
  CHECK_FALSE(s[0].ci.defined);
  for (std::size_t i = 2; i < s.size(); ++i) CHECK(s[i].mean < s[i - 1].mean);
  for (const auto& l : s) {
    CHECK(l.ci.low <= l.mean);
    CHECK(l.mean <= l.ci.high);
  }
}

TEST_CASE("level counts conserve projects") {
  const auto d = generate_synthetic(9, 300);
  for (int f = 1; f <= 8; ++f) {
    std::size_t total = 0;
    for (auto c : level_counts(d, f)) total += c;
    CHECK(total == d.size());
  }
}

TEST_CASE("confidence intervals shrink with sample size") {
  std::mt19937 rng(12);
  std::normal_distribution<double> n(18, 4.5);
  auto width = [&](std::size_t size) {
    double w = 0;
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> v(size);
      for (auto& x : v) x = n(rng);
      const auto ci = ci95_mean(v);
      w += ci.high - ci.low;
    }
    return w / 200;
  };
  const double w25 = width(25);
  const double w100 = width(100);
  CHECK(w25 / w100 == doctest::Approx(2.0).epsilon(0.15));
}
