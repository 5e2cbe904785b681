#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucp/dataset.hpp"
#include "ucp/locality.hpp"
#include "ucp/metrics.hpp"
#include "ucp/model.hpp"

namespace ucp::eval {

inline constexpr std::size_t kMinLoocvProjects = 10;

struct LoocvConfig {
  ModelConfig model;
  std::size_t min_local = 5;
  double pdr_floor = ensemble::kDefaultPdrFloor;
  // Worker threads for folds; 0 = hardware concurrency.
  std::size_t threads = 0;
  // Keep per-fold id lists (partitioned set, fit set) for leak audits.
  bool record_ids = true;
};

struct FoldTrace {
  std::string test_id;
  std::string scheme;
  std::string partition;  // label of the local set, "all" on fallback
  bool fallback = false;
  double predicted_pdr = 0.0;  // floored
  double predicted_effort = 0.0;
  double actual_effort = 0.0;
  double ucp = 0.0;
  std::optional<std::array<double, 3>> member_pdrs;  // ensemble only, unfloored
  std::optional<ensemble::EnsembleWeights> weights;  // ensemble only
  std::vector<std::string> partitioned_ids;
  std::vector<std::string> fit_ids;
};

struct EvaluationReport {
  std::string dataset;
  std::string scheme;
  ModelKind model = ModelKind::Karner;
  MetricTriple metrics;
  std::vector<FoldTrace> folds;  // dataset order
  LoocvConfig config;
  std::uint64_t seed = 0;
};

// Leave-one-out over `dataset`: each fold partitions and fits on the other
// projects only. A k-means scheme takes its seed from `seed`.
EvaluationReport loocv_run(const Dataset& dataset, const locality::PartitionScheme& scheme, ModelKind model,
                           const LoocvConfig& config = {}, std::uint64_t seed = 42);

// Table layouts: locality rows e1..e8, kmeans against svr, stepwise, cart,
// ensemble; the no-locality table adds the two baselines.
inline constexpr std::array<ModelKind, 4> kLocalityModels{ModelKind::Svr, ModelKind::Stepwise, ModelKind::Cart,
                                                          ModelKind::Ensemble};
inline constexpr std::array<ModelKind, 6> kNoLocalityModels{ModelKind::Svr,      ModelKind::Stepwise,
                                                            ModelKind::Cart,     ModelKind::Ensemble,
                                                            ModelKind::Karner,   ModelKind::SchneiderWinters};
std::vector<locality::PartitionScheme> locality_schemes(std::uint64_t seed);

struct BenchmarkResult {
  std::string dataset;
  std::uint64_t seed = 0;
  std::vector<EvaluationReport> locality;     // scheme-major, kLocalityModels order
  std::vector<EvaluationReport> no_locality;  // kNoLocalityModels order

  const EvaluationReport& at(const std::string& scheme, ModelKind model) const;
  std::size_t size() const { return locality.size() + no_locality.size(); }
};

BenchmarkResult benchmark_all(const Dataset& dataset, const LoocvConfig& config = {}, std::uint64_t seed = 42);

}  // namespace ucp::eval
