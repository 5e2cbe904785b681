#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucp/dataset.hpp"
#include "ucp/ensemble.hpp"
#include "ucp/learners.hpp"
#include "ucp/locality.hpp"

namespace ucp {

struct ModelConfig {
  regress::LearnerConfigs learners;
  ensemble::EnsembleConfig ensemble;
};

struct EnsembleModel {
  std::array<regress::LearnerModel, 3> members;  // ensemble::kMembers order
  ensemble::EnsembleWeights weights;
  ensemble::ErrorProfile profile;
};

// Trained productivity predictor. Baselines carry no learned state.
class FittedModel {
 public:
  using Body = std::variant<std::monostate, regress::LearnerModel, EnsembleModel>;

  FittedModel() = default;
  FittedModel(ModelKind kind, Body body, std::size_t n_train);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t n_train() const noexcept { return n_train_; }
  const Body& body() const noexcept { return body_; }
  const EnsembleModel* ensemble() const { return std::get_if<EnsembleModel>(&body_); }
  const regress::LearnerModel* learner() const { return std::get_if<regress::LearnerModel>(&body_); }

  // Unclamped PDR.
  double predict_pdr(const ProjectInputs& project) const;
  // Member PDRs of an ensemble, in ensemble::kMembers order.
  std::array<double, 3> member_pdrs(const ProjectInputs& project) const;

 private:
  ModelKind kind_ = ModelKind::Karner;
  Body body_;
  std::size_t n_train_ = 0;
};

FittedModel fit_model(ModelKind kind, const Dataset& training, const ModelConfig& config = {});

std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(std::string_view text);

// Partitioning plus one model per partition, as used for a fold of the
// leave-one-out harness, but over the whole dataset.
struct LocalPredictor {
  locality::Partitioning partitioning;
  std::vector<std::optional<FittedModel>> local;  // empty where partition < min_local
  std::vector<std::size_t> partition_sizes;       // training members per partition
  FittedModel fallback;                           // trained on everything
  std::size_t min_local = 5;
  double pdr_floor = ensemble::kDefaultPdrFloor;
};

struct Prediction {
  double pdr = 0.0;  // floored
  double ucp = 0.0;
  double effort = 0.0;
  std::string partition;  // label, or "all" when the fallback model was used
  bool fallback = false;
  ModelKind kind = ModelKind::Karner;
  std::optional<std::array<double, 3>> member_pdrs;
  std::optional<ensemble::EnsembleWeights> weights;
};

LocalPredictor fit_local_predictor(const Dataset& dataset, const locality::PartitionScheme& scheme, ModelKind kind,
                                   const ModelConfig& config = {}, std::size_t min_local = 5,
                                   double pdr_floor = ensemble::kDefaultPdrFloor);
Prediction predict(const LocalPredictor& predictor, const ProjectInputs& project);

// Partition members are not stored; `assign` only needs labels and centroids.
std::string predictor_to_json(const LocalPredictor& predictor);
LocalPredictor predictor_from_json(std::string_view text);

}  // namespace ucp
