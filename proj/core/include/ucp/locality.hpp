#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucp/dataset.hpp"
#include "ucp/preprocess.hpp"

namespace ucp::locality {

// Merged influence level used as a local-dataset key: {0,1,2} -> L12,
// {3} -> L3, {4,5} -> L45.
enum class MergedLevel { L12 = 0, L3 = 1, L45 = 2 };

MergedLevel merge_level(int score);
std::string_view to_string(MergedLevel level);

// Whole training set as one partition.
struct NoLocality {
  friend bool operator==(const NoLocality&, const NoLocality&) = default;
};

// Partition by the merged levels of factor E<factor>.
struct FactorLevels {
  int factor = 1;
  friend bool operator==(const FactorLevels&, const FactorLevels&) = default;
};

// k-means over the min-max normalized E1..E8 vector, k picked by Dunn index.
struct KMeansEnv {
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::uint64_t seed = 42;
  // Additionally cap k at floor(n / 2) so clusters keep >= 2 expected members.
  bool cap_at_half = true;
  friend bool operator==(const KMeansEnv&, const KMeansEnv&) = default;
};

using PartitionScheme = std::variant<NoLocality, FactorLevels, KMeansEnv>;

void validate(const PartitionScheme& scheme);

// "none", "e1".."e8", "kmeans"
std::string scheme_label(const PartitionScheme& scheme);
PartitionScheme parse_scheme(std::string_view label, std::uint64_t seed = 42);

using EnvPoint = std::array<double, kFactorCount>;

struct Partition {
  std::string label;
  // Positions in the dataset the partitioning was built from.
  std::vector<std::size_t> members;
};

struct ClusterModel {
  preprocess::ScalerParams scaler;  // E1..E8 min-max, fit on the partitioned set
  std::vector<EnvPoint> centroids;  // in scaled space
  std::size_t k = 0;
  double dunn = 0.0;
};

struct Partitioning {
  PartitionScheme scheme;
  std::vector<Partition> partitions;
  std::vector<std::string> ids;  // ids of the partitioned dataset, by position
  std::optional<ClusterModel> clusters;

  std::size_t find(std::string_view label) const;  // npos if absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

std::vector<EnvPoint> env_points(const Dataset& dataset);

Partitioning partition_none(const Dataset& dataset);
Partitioning partition_by_factor(const Dataset& dataset, int factor);
Partitioning partition_by_kmeans(const Dataset& dataset, const KMeansEnv& scheme);
Partitioning build_partitioning(const Dataset& dataset, const PartitionScheme& scheme);

struct KMeansResult {
  std::vector<std::size_t> assignments;
  std::vector<EnvPoint> centroids;
  // Total within-cluster squared distance after each update step.
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
};

inline constexpr std::size_t kKMeansMaxIterations = 300;

// Lloyd's algorithm with Euclidean distance, seeded random choice of k
// distinct points as initial centres. Ties go to the lowest cluster index; a
// cluster that empties is re-seeded with the point farthest from its centre.
KMeansResult kmeans(std::span<const EnvPoint> points, std::size_t k, std::uint64_t seed);

// Minimum pairwise centroid distance over maximum within-cluster diameter
// (point to point). +infinity when every cluster is a singleton.
double dunn_index(std::span<const EnvPoint> points, std::span<const std::size_t> assignments,
                  std::span<const EnvPoint> centroids);

struct SelectKResult {
  std::size_t k = 0;
  KMeansResult clustering;
  std::vector<double> dunn_by_k;  // index 0 = k_min
};

// Runs k-means for every k in [k_min, min(k_max, distinct points)] with
// derive_seed(seed, k); largest Dunn index wins, ties to the smaller k.
SelectKResult select_k(std::span<const EnvPoint> points, std::size_t k_min, std::size_t k_max,
                       std::uint64_t seed);

std::size_t count_distinct(std::span<const EnvPoint> points);

// Partition index a new project falls into, or nullopt when its merged level
// has no members in this partitioning.
std::optional<std::size_t> assign(const EnvironmentalAssessment& env, const Partitioning& partitioning);

// `id,partition_label`
void write_partitioning_csv(const Partitioning& partitioning, std::ostream& out);

}  // namespace ucp::locality
