#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ucp/dataset.hpp"

namespace fixtures {

inline ucp::EnvironmentalAssessment env(std::array<int, 8> s) { return ucp::EnvironmentalAssessment(s); }

inline ucp::Project project(std::string id, double uaw, double uucw, double tcf, double ef, std::array<int, 8> e,
                            double effort) {
  return ucp::Project(std::move(id), ucp::Source::Synthetic, uaw, uucw, tcf, ef, env(e), effort);
}

// n projects with a planted PDR signal in uucw and e1, everything else mildly noisy.
inline ucp::Dataset small_dataset(std::size_t n, unsigned seed = 7) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> score(0, 5);
  std::vector<ucp::Project> ps;
  for (std::size_t i = 0; i < n; ++i) {
    std::array<int, 8> e{};
    for (auto& s : e) s = score(rng);
    const double uaw = 5 + 20 * u(rng);
    const double uucw = 50 + 400 * u(rng);
    const double tcf = 0.8 + 0.3 * u(rng);
    const double ef = 0.7 + 0.5 * u(rng);
    const double pdr = 10 + uucw / 50 + 2 * e[0] + 3 * u(rng);
    const double ucp = (uaw + uucw) * tcf * ef;
    ps.push_back(project("P" + std::to_string(i), uaw, uucw, tcf, ef, e, pdr * ucp));
  }
  return ucp::Dataset("fixture", std::move(ps));
}

inline bool close_rel(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace fixtures
