#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "ucp/error.hpp"
#include "ucp/preprocess.hpp"

using namespace ucp;
using namespace ucp::preprocess;

namespace {

// Dataset whose effort column carries the given values (one factor varied).
Dataset effort_dataset(const std::vector<double>& efforts) {
  std::vector<Project> ps;
  for (std::size_t i = 0; i < efforts.size(); ++i) {
    ps.push_back(fixtures::project("p" + std::to_string(i), 10, 90, 1, 1, {3, 3, 3, 3, 3, 3, 3, 3}, efforts[i]));
  }
  return Dataset("e", ps);
}

}  // namespace

TEST_CASE("z-score: nineteen equal values and one spike") {
  std::vector<double> e(19, 100.0);
  e.push_back(110.0);
  const auto d = effort_dataset(e);
  const std::vector<Feature> f{Feature::Effort};
  const auto r = zscore_outliers(d, f, 3.0);
  // oracle: mean offset 0.5, sample stdev sqrt(5) on the shifted values
  CHECK(r.z[19][0] == doctest::Approx(9.5 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(r.z[19][0] == doctest::Approx(4.2485).epsilon(1e-4));
  CHECK(r.flagged[19]);
  CHECK(r.flagged_count() == 1);
  CHECK(r.removed_ids() == std::vector<std::string>{"p19"});
  const auto cleaned = remove_outliers(d, r);
  CHECK(cleaned.size() == 19);
}

TEST_CASE("z-score: constant features never flag") {
  const auto d = effort_dataset(std::vector<double>(10, 500.0));
  const auto f = default_outlier_features();
  const auto r = zscore_outliers(d, f);
  CHECK(r.flagged_count() == 0);
  CHECK(remove_outliers(d, r) == d);
}

TEST_CASE("z-score preconditions") {
  const auto d = effort_dataset({1, 2});
  const std::vector<Feature> f{Feature::Effort};
  CHECK_THROWS_AS(zscore_outliers(d, f), Error);
  const auto d3 = effort_dataset({1, 2, 3});
  CHECK_THROWS_AS(zscore_outliers(d3, f, 0.0), Error);
}

TEST_CASE("remove_outliers refuses to empty the dataset") {
  const auto d = effort_dataset({1, 2, 3, 4});
  const std::vector<Feature> f{Feature::Effort};
  auto r = zscore_outliers(d, f);
  std::fill(r.flagged.begin(), r.flagged.end(), true);
  CHECK_THROWS_AS(remove_outliers(d, r), Error);
}

TEST_CASE("z-score flags are invariant under affine transforms") {
  const auto d = fixtures::small_dataset(60, 3);
  const std::vector<Feature> f{Feature::Effort};
  const auto a = zscore_outliers(d, f, 2.0);
  std::vector<Project> scaled;
  for (const auto& p : d) {
    scaled.push_back(Project(p.id(), p.source(), p.uaw(), p.uucw(), p.tcf(), p.ef(), p.env(), 3.5 * p.effort() + 10));
  }
  const auto b = zscore_outliers(Dataset("s", scaled), f, 2.0);
  CHECK(a.flagged == b.flagged);
}

TEST_CASE("outlier CSV") {
  std::vector<double> e(19, 100.0);
  e.push_back(110.0);
  const std::vector<Feature> f{Feature::Effort};
  std::ostringstream s;
  write_outlier_csv(zscore_outliers(effort_dataset(e), f), s);
  const auto text = s.str();
  CHECK(text.rfind("id,flagged,max_abs_z\n", 0) == 0);
  CHECK(text.find("p19,true,") != std::string::npos);
  CHECK(text.find("p0,false,") != std::string::npos);
}

TEST_CASE("min-max scaling") {
  const std::vector<double> v{2, 4, 6};
  const auto s = minmax_fit(v);
  CHECK(minmax_apply(s, v) == std::vector<double>{0, 0.5, 1});
  const std::vector<double> c{5, 5, 5};
  CHECK(minmax_fit(c).apply(0, 5) == 0);
  const std::vector<double> w{0, 10};
  CHECK(minmax_fit(w).apply(0, 15) == 1.5);
  CHECK_THROWS(minmax_fit(std::vector<double>{}));
}

TEST_CASE("min-max maps the fit set into [0,1]") {
  std::mt19937 rng(5);
  std::normal_distribution<double> n(0, 100);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::array<double, 4>> rows(17);
    for (auto& r : rows) {
      for (auto& x : r) x = n(rng);
    }
    const auto s = minmax_fit<4>(rows);
    for (const auto& r : minmax_apply<4>(s, rows)) {
      for (double x : r) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
    }
  }
}

TEST_CASE("KS statistic matches a reference implementation") {
  // Reference statistics from scipy.stats.kstest against N(mean, sample sd).
  const std::vector<double> x{12.1, 15.3, 9.8,  22.4, 18.0, 17.2, 14.9, 25.1, 19.6, 16.4,
                              13.3, 20.8, 11.7, 18.9, 21.5, 16.0, 14.2, 23.3, 17.7, 15.8};
  const auto a = normality_check(x);
  CHECK(a.statistic == doctest::Approx(0.07778166716515622).epsilon(1e-10));
  CHECK(a.is_normal);
  const std::vector<double> y{1, 1, 1, 1, 2, 2, 3, 50, 100, 4};
  const auto b = normality_check(y);
  CHECK(b.statistic == doctest::Approx(0.44748053196458004).epsilon(1e-10));
  CHECK_FALSE(b.is_normal);
}

TEST_CASE("KS verdicts on seeded samples") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> normal(1000), lognormal(1000);
  for (auto& v : normal) v = n(rng);
  for (auto& v : lognormal) v = std::exp(1.5 * n(rng));
  CHECK(normality_check(normal).is_normal);
  CHECK_FALSE(normality_check(lognormal).is_normal);
  const auto c = normality_check(std::vector<double>(8, 3.0));
  CHECK_FALSE(c.is_normal);
  CHECK(c.statistic == 1.0);
  CHECK_THROWS(normality_check(std::vector<double>{1, 2, 3, 4}));
  CHECK_THROWS_AS(normality_check(normal, 0.5), DomainError);
}

TEST_CASE("Lilliefors critical value at n = 20, alpha = 0.05") {
  const std::vector<double> x{12.1, 15.3, 9.8,  22.4, 18.0, 17.2, 14.9, 25.1, 19.6, 16.4,
                              13.3, 20.8, 11.7, 18.9, 21.5, 16.0, 14.2, 23.3, 17.7, 15.8};
  // Stephens' modified form: 0.895 / (sqrt(n) - 0.01 + 0.85 / sqrt(n)); tabled value is about 0.19
  const double rn = std::sqrt(20.0);
  CHECK(normality_check(x).critical_value == doctest::Approx(0.895 / (rn - 0.01 + 0.85 / rn)));
  CHECK(normality_check(x).critical_value == doctest::Approx(0.190).epsilon(0.03));
}

TEST_CASE("log transform") {
  const auto v = log_transform(std::vector<double>{1, std::exp(1.0), std::exp(2.0)});
  CHECK(v[0] == 0);
  CHECK(v[1] == doctest::Approx(1));
  CHECK(v[2] == doctest::Approx(2));
  CHECK(log_transform(std::vector<double>{1})[0] == 0);
  CHECK_THROWS_AS(log_transform(std::vector<double>{0, 1}), DomainError);
}
