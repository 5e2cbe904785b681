#pragma once

// Independent reference implementations used by unit tests and the
// acceptance binary. Deliberately naive: no shared code with core/.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "ucp/cart.hpp"
#include "ucp/locality.hpp"
#include "ucp/svr.hpp"

namespace oracle {

struct Metrics {
  double mae = 0, mbre = 0, mibre = 0;
};

inline Metrics metrics(const std::vector<double>& e, const std::vector<double>& h) {
  Metrics m;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double d = std::fabs(e[i] - h[i]);
    m.mae += d;
    m.mbre += d / (e[i] < h[i] ? e[i] : h[i]);
    m.mibre += d / (e[i] > h[i] ? e[i] : h[i]);
  }
  const double n = static_cast<double>(e.size());
  return {m.mae / n, m.mbre / n, m.mibre / n};
}

// Unfavourable scores: E1..E6 below 3, E7..E8 above 3.
inline double sw_pdr(const std::array<int, 8>& s) {
  int bad = 0;
  for (int i = 0; i < 8; ++i) {
    if (i < 6 && s[static_cast<std::size_t>(i)] <= 2) ++bad;
    if (i >= 6 && s[static_cast<std::size_t>(i)] >= 4) ++bad;
  }
  return bad <= 2 ? 20.0 : bad <= 4 ? 28.0 : 36.0;
}

inline double sse(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

// Members of every node, found by routing each training point from the root.
inline std::vector<std::vector<std::size_t>> node_members(const ucp::regress::CartModel& m,
                                                          const std::vector<ucp::FeatureVector>& x) {
  std::vector<std::vector<std::size_t>> out(m.nodes.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int n = 0;
    while (true) {
      out[static_cast<std::size_t>(n)].push_back(i);
      const auto& node = m.nodes[static_cast<std::size_t>(n)];
      if (node.feature < 0) break;
      n = x[i][static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
  }
  return out;
}

// Best admissible split SSE at a node: every feature, every midpoint between
// consecutive distinct values.
inline double best_split_sse(const std::vector<std::size_t>& members, const std::vector<ucp::FeatureVector>& x,
                             const std::vector<double>& y, std::size_t min_leaf) {
  double best = INFINITY;
  for (std::size_t f = 0; f < 4; ++f) {
    std::vector<double> values;
    for (auto i : members) values.push_back(x[i][f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double t = (values[k] + values[k + 1]) / 2;
      std::vector<double> l, r;
      for (auto i : members) (x[i][f] <= t ? l : r).push_back(y[i]);
      if (l.size() < min_leaf || r.size() < min_leaf) continue;
      best = std::min(best, sse(l) + sse(r));
    }
  }
  return best;
}

inline double rbf(const ucp::FeatureVector& a, const ucp::FeatureVector& b, double gamma) {
  double d = 0;
  for (std::size_t i = 0; i < 4; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * d);
}

// Largest KKT violation of an epsilon-SVR dual solution, recomputing the
// decision function from the per-point multipliers.
inline double kkt_violation(const ucp::regress::SvrModel& m, const std::vector<ucp::FeatureVector>& x,
                            const std::vector<double>& y) {
  const double c = m.c;
  const double eps = m.epsilon;
  const double slack = 1e-12 * c;
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = m.bias;
    for (std::size_t j = 0; j < x.size(); ++j) f += (m.alpha[j] - m.alpha_star[j]) * rbf(x[j], x[i], m.gamma);
    const double r = y[i] - f;
    const double a = m.alpha[i];
    const double s = m.alpha_star[i];
    double v = 0;
    if (a <= slack && s <= slack) {
      v = std::max(0.0, std::abs(r) - eps);
    } else if (a > slack) {
      v = a >= c - slack ? std::max(0.0, eps - r) : std::abs(r - eps);
    } else {
      v = s >= c - slack ? std::max(0.0, eps + r) : std::abs(r + eps);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

// Normal equations (X'X) b = X'y by Gaussian elimination with partial
// pivoting. b[0] is the intercept.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& cols,
                                            const std::vector<double>& y) {
  const std::size_t p = cols.size() + 1;
  const std::size_t n = y.size();
  auto col = [&](std::size_t j, std::size_t i) { return j == 0 ? 1.0 : cols[j - 1][i]; };
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t i = 0; i < n; ++i) a[r][c] += col(r, i) * col(c, i);
    }
    for (std::size_t i = 0; i < n; ++i) a[r][p] += col(r, i) * y[i];
  }
  for (std::size_t k = 0; k < p; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < p; ++r) {
      if (std::abs(a[r][k]) > std::abs(a[piv][k])) piv = r;
    }
    std::swap(a[k], a[piv]);
    for (std::size_t r = k + 1; r < p; ++r) {
      const double f = a[r][k] / a[k][k];
      for (std::size_t c = k; c <= p; ++c) a[r][c] -= f * a[k][c];
    }
  }
  std::vector<double> b(p);
  for (std::size_t k = p; k-- > 0;) {
    double s = a[k][p];
    for (std::size_t c = k + 1; c < p; ++c) s -= a[k][c] * b[c];
    b[k] = s / a[k][k];
  }
  return b;
}

inline double dist(const ucp::locality::EnvPoint& a, const ucp::locality::EnvPoint& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Brute-force Dunn: min over centroid pairs / max over same-cluster point pairs.
inline double dunn(const std::vector<ucp::locality::EnvPoint>& pts, const std::vector<std::size_t>& a,
                   const std::vector<ucp::locality::EnvPoint>& c) {
  double gap = INFINITY;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) gap = std::min(gap, dist(c[i], c[j]));
  }
  double diam = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (a[i] == a[j]) diam = std::max(diam, dist(pts[i], pts[j]));
    }
  }
  if (diam == 0) return gap == 0 ? 0 : INFINITY;
  return gap / diam;
}

// k tight blobs in 8-d space with centres at least 1 apart.
inline std::vector<ucp::locality::EnvPoint> blobs(std::mt19937& rng, std::size_t k, std::size_t n,
                                                  std::vector<std::size_t>& truth) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<ucp::locality::EnvPoint> centres;
  while (centres.size() < k) {
    ucp::locality::EnvPoint c{};
    for (auto& x : c) x = u(rng) < 0.5 ? 0.0 : 1.0;
    bool far = true;
    for (const auto& o : centres) far = far && dist(o, c) >= 1.0;
    if (far) centres.push_back(c);
  }
  std::vector<ucp::locality::EnvPoint> pts;
  truth.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i % k;
    auto p = centres[b];
    for (auto& x : p) x += 0.03 * (u(rng) - 0.5);
    pts.push_back(p);
    truth.push_back(b);
  }
  return pts;
}

inline bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace oracle
