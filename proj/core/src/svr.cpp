#include "ucp/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <numeric>

#include "ucp/error.hpp"

namespace ucp::regress {

double rbf_kernel(const FeatureVector& a, const FeatureVector& b, double gamma) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * d);
}

double auto_gamma(std::span<const FeatureVector> x) {
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  for (std::size_t f = 0; f < FeatureVector{}.size(); ++f) {
    double mean = 0.0;
    for (const auto& row : x) mean += row[f];
    mean /= n;
    double var = 0.0;
    for (const auto& row : x) var += (row[f] - mean) * (row[f] - mean);
    total += var / n;
  }
  const double mean_var = total / static_cast<double>(FeatureVector{}.size());
  if (!(mean_var > 0)) return 0.0;
  return 1.0 / (4.0 * mean_var);
}

namespace {

constexpr double kTau = 1e-12;

// LRU cache of kernel rows K(i, .) over the n training points.
class KernelCache {
 public:
  KernelCache(std::span<const FeatureVector> x, double gamma, std::size_t budget_entries)
      : x_(x), gamma_(gamma), rows_(x.size()), where_(x.size()) {
    capacity_ = std::max<std::size_t>(2, budget_entries / std::max<std::size_t>(1, x.size()));
  }

  const std::vector<double>& row(std::size_t i) {
    if (!rows_[i].empty()) {
      lru_.splice(lru_.begin(), lru_, where_[i]);
      return rows_[i];
    }
    if (lru_.size() >= capacity_) {
      const std::size_t victim = lru_.back();
      lru_.pop_back();
      rows_[victim].clear();
      rows_[victim].shrink_to_fit();
    }
    auto& r = rows_[i];
    r.resize(x_.size());
    for (std::size_t j = 0; j < x_.size(); ++j) r[j] = rbf_kernel(x_[i], x_[j], gamma_);
    lru_.push_front(i);
    where_[i] = lru_.begin();
    return r;
  }

 private:
  std::span<const FeatureVector> x_;
  double gamma_;
  std::size_t capacity_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::list<std::size_t>::iterator> where_;
  std::list<std::size_t> lru_;
};

// Dual over 2n variables: t < n are alpha_t (sign +1), t >= n are alpha*_{t-n}
// (sign -1). Q_tu = s_t s_u K(t mod n, u mod n); linear term p.
class SmoSolver {
 public:
  SmoSolver(std::span<const FeatureVector> x, std::span<const double> y, const SvrConfig& cfg, double gamma)
      : n_(x.size()), l_(2 * x.size()), c_(cfg.c), tol_(cfg.tol), cache_(x, gamma, cfg.cache_entries),
        max_iter_(cfg.max_iterations) {
    sign_.resize(l_);
    grad_.resize(l_);
    alpha_.assign(l_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      sign_[i] = 1;
      sign_[i + n_] = -1;
      grad_[i] = cfg.epsilon - y[i];
      grad_[i + n_] = cfg.epsilon + y[i];
    }
  }

  void solve() {
    for (iterations_ = 0; iterations_ < max_iter_; ++iterations_) {
      std::size_t i = 0;
      std::size_t j = 0;
      if (!select_working_set(i, j)) {
        converged_ = true;
        return;
      }
      update_pair(i, j);
    }
    converged_ = false;
  }

  double rho() const {
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < l_; ++t) {
      const double yg = sign_[t] * grad_[t];
      if (at_upper(t)) {
        if (sign_[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (at_lower(t)) {
        if (sign_[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++free;
        sum_free += yg;
      }
    }
    return free > 0 ? sum_free / static_cast<double>(free) : (ub + lb) / 2.0;
  }

  const std::vector<double>& alpha() const { return alpha_; }
  std::size_t iterations() const { return iterations_; }
  bool converged() const { return converged_; }

 private:
  bool at_upper(std::size_t t) const { return alpha_[t] >= c_; }
  bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }

  // Q_tu from the cached kernel row of t.
  double q(const std::vector<double>& krow_t, std::size_t t, std::size_t u) const {
    return sign_[t] * sign_[u] * krow_t[u % n_];
  }

  // Second-order working-set selection (Fan, Chen & Lin 2005).
  bool select_working_set(std::size_t& out_i, std::size_t& out_j) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t i = l_;
    for (std::size_t t = 0; t < l_; ++t) {
      if (sign_[t] > 0) {
        if (!at_upper(t) && -grad_[t] >= gmax) {
          gmax = -grad_[t];
          i = t;
        }
      } else if (!at_lower(t) && grad_[t] >= gmax) {
        gmax = grad_[t];
        i = t;
      }
    }
    if (i == l_) return false;

    const auto& krow_i = cache_.row(i % n_);
    std::size_t j = l_;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < l_; ++t) {
      const double qd = 1.0;  // K(t, t) for the RBF kernel
      if (sign_[t] > 0) {
        if (at_lower(t)) continue;
        const double diff = gmax + grad_[t];
        gmax2 = std::max(gmax2, grad_[t]);
        if (diff > 0) {
          double quad = 1.0 + qd - 2.0 * sign_[i] * q(krow_i, i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= best) {
            best = obj;
            j = t;
          }
        }
      } else {
        if (at_upper(t)) continue;
        const double diff = gmax - grad_[t];
        gmax2 = std::max(gmax2, -grad_[t]);
        if (diff > 0) {
          double quad = 1.0 + qd + 2.0 * sign_[i] * q(krow_i, i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= best) {
            best = obj;
            j = t;
          }
        }
      }
    }
    if (gmax + gmax2 < tol_ || j == l_) return false;
    out_i = i;
    out_j = j;
    return true;
  }

  void update_pair(std::size_t i, std::size_t j) {
    const auto& krow_i = cache_.row(i % n_);
    const double qij = q(krow_i, i, j);
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    double& ai = alpha_[i];
    double& aj = alpha_[j];

    if (sign_[i] != sign_[j]) {
      double quad = 2.0 + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > c_) { ai = c_; aj = c_ - diff; }
      } else if (aj > c_) {
        aj = c_;
        ai = c_ + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) { ai = c_; aj = sum - c_; }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > c_) {
        if (aj > c_) { aj = c_; ai = sum - c_; }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }

    const double di = ai - old_i;
    const double dj = aj - old_j;
    // Copy row i: fetching row j may evict it.
    const std::vector<double> ki = krow_i;
    const auto& kj = cache_.row(j % n_);
    for (std::size_t t = 0; t < l_; ++t) {
      grad_[t] += q(ki, i, t) * di + q(kj, j, t) * dj;
    }
  }

  std::size_t n_;
  std::size_t l_;
  double c_;
  double tol_;
  KernelCache cache_;
  std::size_t max_iter_;
  std::vector<int> sign_;
  std::vector<double> grad_;
  std::vector<double> alpha_;
  std::size_t iterations_ = 0;
  bool converged_ = false;
};

}  // namespace

SvrModel svr_fit(std::span<const FeatureVector> x, std::span<const double> y, const SvrConfig& config) {
  if (x.size() != y.size()) throw Error("svr_fit: feature/target size mismatch");
  if (x.size() < 2) throw Error("svr_fit: needs at least 2 training points");
  if (!(config.c > 0)) throw DomainError("svr_fit: C must be > 0");
  if (!(config.epsilon >= 0)) throw DomainError("svr_fit: epsilon must be >= 0");
  if (!(config.tol > 0)) throw DomainError("svr_fit: tol must be > 0");
  if (config.gamma && !(*config.gamma > 0)) throw DomainError("svr_fit: gamma must be > 0");

  SvrModel model;
  model.c = config.c;
  model.epsilon = config.epsilon;
  const std::size_t n = x.size();

  const double auto_g = auto_gamma(x);
  if (!(auto_g > 0)) {
    // All inputs identical: nothing to separate, predict the mean target.
    model.bias_only = true;
    model.gamma = config.gamma.value_or(1.0);
    model.bias = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    model.alpha.assign(n, 0.0);
    model.alpha_star.assign(n, 0.0);
    return model;
  }
  model.gamma = config.gamma.value_or(auto_g);

  SmoSolver solver(x, y, config, model.gamma);
  solver.solve();
  model.iterations = solver.iterations();
  model.converged = solver.converged();
  model.bias = -solver.rho();

  const auto& a = solver.alpha();
  model.alpha.resize(n);
  model.alpha_star.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // alpha_i * alpha*_i = 0 at the optimum; remove any common part, which
    // leaves the decision function and the equality constraint unchanged.
    const double common = std::min(a[i], a[i + n]);
    model.alpha[i] = a[i] - common;
    model.alpha_star[i] = a[i + n] - common;
    const double coef = model.alpha[i] - model.alpha_star[i];
    if (coef != 0.0) {
      model.support_vectors.push_back(x[i]);
      model.coefficients.push_back(coef);
    }
  }
  return model;
}

double svr_predict(const SvrModel& model, const FeatureVector& x) {
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.coefficients[i] * rbf_kernel(model.support_vectors[i], x, model.gamma);
  }
  return f;
}

}  // namespace ucp::regress
