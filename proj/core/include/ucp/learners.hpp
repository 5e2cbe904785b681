#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "ucp/cart.hpp"
#include "ucp/dataset.hpp"
#include "ucp/preprocess.hpp"
#include "ucp/stepwise.hpp"
#include "ucp/svr.hpp"

namespace ucp {

enum class ModelKind { Svr, Stepwise, Cart, Ensemble, Karner, SchneiderWinters };

// "svr", "stepwise", "cart", "ensemble", "karner", "sw"
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);
bool is_base_learner(ModelKind kind);

}  // namespace ucp

namespace ucp::regress {

struct LearnerConfigs {
  CartConfig cart;
  SvrConfig svr;
  StepwiseConfig stepwise;
};

// One of the three base learners together with its input handling. CART and
// SVR see min-max scaled features (scaler fit on the training rows). Stepwise
// sees raw features: OLS with an intercept is invariant to per-feature affine
// scaling, and raw values stay positive for its log transform.
struct LearnerModel {
  ModelKind kind = ModelKind::Cart;
  std::optional<preprocess::ScalerParams> scaler;
  std::variant<CartModel, SvrModel, StepwiseModel> model;
  std::size_t n_train = 0;

  double predict(const FeatureVector& raw) const;
};

// Training sets below stepwise's 6-observation minimum get an intercept-only
// stepwise model (the training mean).
LearnerModel fit_learner(ModelKind kind, std::span<const FeatureVector> raw_x, std::span<const double> y,
                         const LearnerConfigs& configs);

}  // namespace ucp::regress
