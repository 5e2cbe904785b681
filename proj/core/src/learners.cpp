#include "ucp/learners.hpp"

#include <numeric>

#include "ucp/error.hpp"

namespace ucp {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Svr: return "svr";
    case ModelKind::Stepwise: return "stepwise";
    case ModelKind::Cart: return "cart";
    case ModelKind::Ensemble: return "ensemble";
    case ModelKind::Karner: return "karner";
    case ModelKind::SchneiderWinters: return "sw";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "svr") return ModelKind::Svr;
  if (text == "stepwise" || text == "sr") return ModelKind::Stepwise;
  if (text == "cart") return ModelKind::Cart;
  if (text == "ensemble") return ModelKind::Ensemble;
  if (text == "karner") return ModelKind::Karner;
  if (text == "sw") return ModelKind::SchneiderWinters;
  throw DomainError("unknown model '" + std::string(text) +
                    "' (expected svr, stepwise, cart, ensemble, karner, sw)");
}

bool is_base_learner(ModelKind kind) {
  return kind == ModelKind::Svr || kind == ModelKind::Stepwise || kind == ModelKind::Cart;
}

}  // namespace ucp

namespace ucp::regress {

double LearnerModel::predict(const FeatureVector& raw) const {
  const FeatureVector x = scaler ? scaler->apply(raw) : raw;
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CartModel>) return cart_predict(m, x);
        else if constexpr (std::is_same_v<T, SvrModel>) return svr_predict(m, x);
        else return stepwise_predict(m, x);
      },
      model);
}

LearnerModel fit_learner(ModelKind kind, std::span<const FeatureVector> raw_x, std::span<const double> y,
                         const LearnerConfigs& configs) {
  if (!is_base_learner(kind)) throw Error("fit_learner: not a base learner");
  if (raw_x.size() != y.size()) throw Error("fit_learner: feature/target size mismatch");
  if (raw_x.empty()) throw Error("fit_learner: empty training set");
  LearnerModel out;
  out.kind = kind;
  out.n_train = raw_x.size();

  if (kind == ModelKind::Stepwise) {
    if (raw_x.size() < FeatureVector{}.size() + 2) {
      StepwiseModel mean_only;
      mean_only.n = raw_x.size();
      mean_only.intercept = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
      out.model = std::move(mean_only);
    } else {
      out.model = stepwise_fit(raw_x, y, configs.stepwise);
    }
    return out;
  }

  out.scaler = preprocess::minmax_fit<4>(raw_x);
  const auto x = preprocess::minmax_apply<4>(*out.scaler, raw_x);
  if (kind == ModelKind::Cart) {
    out.model = cart_fit(x, y, configs.cart);
  } else if (x.size() < 2) {
    SvrModel constant;
    constant.bias_only = true;
    constant.bias = y.front();
    out.model = std::move(constant);
  } else {
    out.model = svr_fit(x, y, configs.svr);
  }
  return out;
}

}  // namespace ucp::regress
