#include "ucp/cart.hpp"

#include <algorithm>
#include <numeric>

#include "ucp/error.hpp"

namespace ucp::regress {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};

class Builder {
 public:
  Builder(std::span<const FeatureVector> x, std::span<const double> y, const CartConfig& config)
      : x_(x), y_(y), config_(config) {}

  CartModel build() {
    CartModel model;
    model.config = config_;
    std::vector<std::size_t> all(x_.size());
    std::iota(all.begin(), all.end(), 0);
    grow(model, std::move(all), 0);
    return model;
  }

 private:
  int grow(CartModel& model, std::vector<std::size_t> members, std::size_t depth) {
    const int index = static_cast<int>(model.nodes.size());
    model.nodes.emplace_back();
    double sum = 0.0;
    for (std::size_t i : members) sum += y_[i];
    const double node_mean = sum / static_cast<double>(members.size());
    {
      CartNode& node = model.nodes.back();
      node.value = node_mean;
      node.count = members.size();
      node.depth = depth;
    }
    if (members.size() < config_.min_split || depth >= config_.max_depth) return index;

    double node_sse = 0.0;
    for (std::size_t i : members) node_sse += (y_[i] - node_mean) * (y_[i] - node_mean);
    const Split split = best_split(members, node_mean);
    // Require a real reduction; a constant target never splits.
    if (split.feature < 0 || !(split.sse < node_sse * (1.0 - 1e-12))) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : members) {
      (x_[i][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(i);
    }
    members.clear();
    members.shrink_to_fit();
    const int l = grow(model, std::move(left), depth + 1);
    const int r = grow(model, std::move(right), depth + 1);
    CartNode& node = model.nodes[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  // Best admissible split over all features; targets are centred on the
  // node mean before accumulating to limit cancellation.
  Split best_split(const std::vector<std::size_t>& members, double node_mean) const {
    Split best;
    bool found = false;
    const std::size_t n = members.size();
    std::vector<std::size_t> order(members);
    for (std::size_t f = 0; f < FeatureVector{}.size(); ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_[a][f] < x_[b][f]; });
      double total = 0.0;
      double total_sq = 0.0;
      for (std::size_t i : order) {
        const double c = y_[i] - node_mean;
        total += c;
        total_sq += c * c;
      }
      double left_sum = 0.0;
      double left_sq = 0.0;
      for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        const double c = y_[order[pos]] - node_mean;
        left_sum += c;
        left_sq += c * c;
        const double here = x_[order[pos]][f];
        const double next = x_[order[pos + 1]][f];
        if (!(here < next)) continue;
        const std::size_t nl = pos + 1;
        const std::size_t nr = n - nl;
        if (nl < config_.min_leaf || nr < config_.min_leaf) continue;
        const double right_sum = total - left_sum;
        const double right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                           (right_sq - right_sum * right_sum / static_cast<double>(nr));
        if (!found || sse < best.sse) {
          found = true;
          best.feature = static_cast<int>(f);
          best.threshold = here + (next - here) / 2.0;
          // Adjacent doubles: the midpoint may round up onto `next`.
          if (!(best.threshold < next)) best.threshold = here;
          best.sse = std::max(0.0, sse);
        }
      }
    }
    return best;
  }

  std::span<const FeatureVector> x_;
  std::span<const double> y_;
  CartConfig config_;
};

}  // namespace

std::size_t CartModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const CartNode& n) { return n.feature < 0; }));
}

std::size_t CartModel::leaf_of(const FeatureVector& x) const {
  if (nodes.empty()) throw Error("CART model has no nodes");
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& node = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                           : node.right);
  }
  return i;
}

CartModel cart_fit(std::span<const FeatureVector> x, std::span<const double> y, const CartConfig& config) {
  if (x.size() != y.size()) throw Error("cart_fit: feature/target size mismatch");
  if (x.empty()) throw Error("cart_fit: empty training set");
  if (config.min_leaf < 1 || config.min_split < 2) throw DomainError("cart_fit: min_leaf >= 1 and min_split >= 2");
  return Builder(x, y, config).build();
}

double cart_predict(const CartModel& model, const FeatureVector& x) { return model.nodes[model.leaf_of(x)].value; }

}  // namespace ucp::regress
