#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ucp/dataset.hpp"

namespace ucp::regress {

struct CartConfig {
  std::size_t min_split = 8;  // nodes smaller than this become leaves
  std::size_t min_leaf = 4;   // no split may leave a child smaller than this
  std::size_t max_depth = 6;
};

// Flat binary tree node. Leaves have feature == -1.
struct CartNode {
  int feature = -1;
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;      // mean target of the node's training members
  std::size_t count = 0;
  std::size_t depth = 0;
};

struct CartModel {
  CartConfig config;
  std::vector<CartNode> nodes;  // nodes[0] is the root

  std::size_t leaf_count() const;
  // Index of the leaf x is routed to.
  std::size_t leaf_of(const FeatureVector& x) const;
};

// Greedy regression tree: each split minimizes the children's total squared
// error over thresholds at midpoints of consecutive distinct feature values.
CartModel cart_fit(std::span<const FeatureVector> x, std::span<const double> y,
                   const CartConfig& config = {});

double cart_predict(const CartModel& model, const FeatureVector& x);

}  // namespace ucp::regress
