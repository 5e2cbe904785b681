#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "ucp/error.hpp"
#include "ucp/stepwise.hpp"

using namespace ucp;
using namespace ucp::regress;

namespace {

using oracle::normal_equations;

// Features roughly normal so no log transform kicks in.
std::vector<FeatureVector> normal_features(unsigned seed, std::size_t n) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> z(0, 1);
  std::vector<FeatureVector> x(n);
  for (auto& r : x) r = {20 + 3 * z(rng), 300 + 40 * z(rng), 1 + 0.05 * z(rng), 1 + 0.1 * z(rng)};
  return x;
}

void check_against_oracle(const StepwiseModel& m, const std::vector<FeatureVector>& x, const std::vector<double>& y) {
  std::vector<std::vector<double>> cols;
  for (auto j : m.retained) {
    std::vector<double> c;
    for (const auto& r : x) c.push_back(m.log_feature[j] ? std::log(r[j]) : r[j]);
    cols.push_back(std::move(c));
  }
  const auto b = normal_equations(cols, y);
  CHECK(m.intercept == doctest::Approx(b[0]).epsilon(1e-6));
  for (std::size_t k = 0; k < m.retained.size(); ++k) CHECK(m.coefficients[k] == doctest::Approx(b[k + 1]).epsilon(1e-6));
  // residuals orthogonal to each retained column
  for (const auto& c : cols) {
    double dot = 0, norm = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      dot += (y[i] - stepwise_predict(m, x[i])) * c[i];
      norm += c[i] * c[i];
    }
    CHECK(std::abs(dot) <= 1e-8 * std::max(1.0, std::sqrt(norm) * y.size()));
  }
}

}  // namespace

TEST_CASE("y = 3 uaw with noise features") {
  const auto x = normal_features(1, 40);
  std::vector<double> y;
  for (const auto& r : x) y.push_back(3 * r[0]);
  // a chance normality rejection would log a feature and bend the linear fixture
  StepwiseConfig raw;
  raw.log_non_normal = false;
  const auto m = stepwise_fit(x, y, raw);
  CHECK(m.log_feature == std::array<bool, 4>{});
  REQUIRE(m.retained == std::vector<std::size_t>{0});
  CHECK(m.coefficients[0] == doctest::Approx(3).epsilon(1e-6));
  CHECK(std::abs(m.intercept) < 1e-6);
  check_against_oracle(m, x, y);
}

TEST_CASE("y = 2 uucw + 5") {
  const auto x = normal_features(2, 40);
  std::vector<double> y;
  for (const auto& r : x) y.push_back(2 * r[1] + 5);
  StepwiseConfig raw;
  raw.log_non_normal = false;
  const auto m = stepwise_fit(x, y, raw);
  REQUIRE(m.retained == std::vector<std::size_t>{1});
  CHECK(m.coefficients[0] == doctest::Approx(2).epsilon(1e-6));
  CHECK(m.intercept == doctest::Approx(5).epsilon(1e-6));
  check_against_oracle(m, x, y);
}

TEST_CASE("pure noise target gives an intercept-only model") {
  int intercept_only = 0;
  for (unsigned s = 0; s < 50; ++s) {
    const auto x = normal_features(100 + s, 30);
    std::mt19937 rng(900 + s);
    std::normal_distribution<double> z(18, 4);
    std::vector<double> y;
    for (std::size_t i = 0; i < x.size(); ++i) y.push_back(z(rng));
    const auto m = stepwise_fit(x, y);
    for (double p : m.p_values) CHECK(p <= 0.05);
    if (m.retained.empty()) {
      ++intercept_only;
      double mean = 0;
      for (double v : y) mean += v;
      mean /= static_cast<double>(y.size());
      CHECK(stepwise_predict(m, x[0]) == doctest::Approx(mean).epsilon(1e-9));
    }
    check_against_oracle(m, x, y);
  }
  // each noise feature survives with probability ~0.05
  CHECK(intercept_only >= 30);
}

TEST_CASE("skewed features are log-transformed") {
  std::mt19937 rng(7);
  std::normal_distribution<double> z(0, 1);
  std::vector<FeatureVector> x;
  std::vector<double> y;
  for (int i = 0; i < 60; ++i) {
    const double uucw = std::exp(5 + 1.2 * z(rng));
    x.push_back({20 + 3 * z(rng), uucw, 1 + 0.05 * z(rng), 1 + 0.1 * z(rng)});
    y.push_back(4 * std::log(uucw) + 1);
  }
  const auto m = stepwise_fit(x, y);
  CHECK(m.log_feature[1]);
  REQUIRE(m.retained == std::vector<std::size_t>{1});
  CHECK(m.coefficients[0] == doctest::Approx(4).epsilon(1e-6));
  check_against_oracle(m, x, y);
}

TEST_CASE("collinear features are dropped") {
  auto x = normal_features(4, 30);
  std::vector<double> y;
  for (auto& r : x) {
    r[3] = 2 * r[2];  // exact collinearity
    y.push_back(r[0] + 7 * r[2]);
  }
  const auto m = stepwise_fit(x, y);
  check_against_oracle(m, x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(stepwise_predict(m, x[i]) == doctest::Approx(y[i]).epsilon(1e-8));
}

TEST_CASE("stepwise predict") {
  StepwiseModel m;
  m.intercept = 1.5;
  m.retained = {0, 2};
  m.coefficients = {2.0, -3.0};
  m.log_feature = {false, false, true, false};
  CHECK(stepwise_predict(m, {4, 99, std::exp(1.0), 99}) == doctest::Approx(1.5 + 8 - 3));
  CHECK_THROWS_AS(stepwise_predict(m, {4, 99, 0.0, 99}), DomainError);
  StepwiseModel c;
  c.intercept = 17;
  CHECK(stepwise_predict(c, {1, 1, 1, 1}) == 17);
}

TEST_CASE("stepwise needs six observations") {
  const auto x = normal_features(3, 5);
  CHECK_THROWS(stepwise_fit(x, std::vector<double>(5, 1.0)));
}

TEST_CASE("exact-fit model reproduces training targets") {
  const auto x = normal_features(5, 20);
  std::vector<double> y;
  for (const auto& r : x) y.push_back(0.5 * r[0] - 0.01 * r[1] + 3);
  const auto m = stepwise_fit(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(stepwise_predict(m, x[i]) == doctest::Approx(y[i]).epsilon(1e-9));
}
