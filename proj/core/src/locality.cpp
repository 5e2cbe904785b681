#include "ucp/locality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "ucp/error.hpp"
#include "ucp/rng.hpp"

namespace ucp::locality {

MergedLevel merge_level(int score) {
  if (score < kMinScore || score > kMaxScore) {
    throw DomainError("factor score " + std::to_string(score) + " outside 0..5");
  }
  if (score <= 2) return MergedLevel::L12;
  if (score == 3) return MergedLevel::L3;
  return MergedLevel::L45;
}

std::string_view to_string(MergedLevel level) {
  switch (level) {
    case MergedLevel::L12: return "L12";
    case MergedLevel::L3: return "L3";
    case MergedLevel::L45: return "L45";
  }
  return "?";
}

void validate(const PartitionScheme& scheme) {
  if (const auto* f = std::get_if<FactorLevels>(&scheme)) {
    if (f->factor < 1 || f->factor > static_cast<int>(kFactorCount)) {
      throw DomainError("factor index must be in 1..8");
    }
  } else if (const auto* km = std::get_if<KMeansEnv>(&scheme)) {
    if (km->k_min < 2) throw DomainError("k_min must be >= 2");
    if (km->k_max < km->k_min) throw DomainError("k_max must be >= k_min");
  }
}

std::string scheme_label(const PartitionScheme& scheme) {
  if (const auto* f = std::get_if<FactorLevels>(&scheme)) return "e" + std::to_string(f->factor);
  if (std::holds_alternative<KMeansEnv>(scheme)) return "kmeans";
  return "none";
}

PartitionScheme parse_scheme(std::string_view label, std::uint64_t seed) {
  if (label == "none") return NoLocality{};
  if (label == "kmeans") return KMeansEnv{.seed = seed};
  if (label.size() == 2 && (label[0] == 'e' || label[0] == 'E') && label[1] >= '1' && label[1] <= '8') {
    return FactorLevels{label[1] - '0'};
  }
  throw DomainError("unknown scheme '" + std::string(label) + "' (expected none, e1..e8, kmeans)");
}

std::size_t Partitioning::find(std::string_view label) const {
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (partitions[i].label == label) return i;
  }
  return npos;
}

std::vector<EnvPoint> env_points(const Dataset& dataset) {
  std::vector<EnvPoint> out;
  out.reserve(dataset.size());
  for (const auto& p : dataset) {
    EnvPoint e{};
    for (std::size_t f = 0; f < kFactorCount; ++f) e[f] = p.env().scores()[f].value();
    out.push_back(e);
  }
  return out;
}

namespace {

std::vector<std::string> ids_of(const Dataset& dataset) {
  std::vector<std::string> ids;
  ids.reserve(dataset.size());
  for (const auto& p : dataset) ids.push_back(p.id());
  return ids;
}

double squared_distance(const EnvPoint& a, const EnvPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::size_t nearest(const EnvPoint& p, std::span<const EnvPoint> centroids) {
  std::size_t best = 0;
  double best_d = squared_distance(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double objective(std::span<const EnvPoint> points, std::span<const std::size_t> assignments,
                 std::span<const EnvPoint> centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) total += squared_distance(points[i], centroids[assignments[i]]);
  return total;
}

void recompute_centroids(std::span<const EnvPoint> points, std::span<const std::size_t> assignments,
                         std::vector<EnvPoint>& centroids, std::vector<std::size_t>& sizes) {
  const std::size_t k = centroids.size();
  std::vector<EnvPoint> sums(k, EnvPoint{});
  sizes.assign(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& s = sums[assignments[i]];
    for (std::size_t d = 0; d < s.size(); ++d) s[d] += points[i][d];
    ++sizes[assignments[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) continue;
    for (std::size_t d = 0; d < centroids[c].size(); ++d) {
      centroids[c][d] = sums[c][d] / static_cast<double>(sizes[c]);
    }
  }
}

// One Lloyd run from a seeded random choice of k distinct points.
KMeansResult lloyd(std::span<const EnvPoint> points, std::size_t k, std::uint64_t seed) {
  const std::size_t n = points.size();
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);

  KMeansResult result;
  std::set<EnvPoint> chosen;
  for (std::size_t idx : order) {
    if (result.centroids.size() == k) break;
    if (chosen.insert(points[idx]).second) result.centroids.push_back(points[idx]);
  }

  result.assignments.assign(n, 0);
  std::vector<std::size_t> sizes;
  for (std::size_t iter = 0; iter < kKMeansMaxIterations; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest(points[i], result.centroids);
      if (c != result.assignments[i]) {
        result.assignments[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    result.iterations = iter + 1;
    recompute_centroids(points, result.assignments, result.centroids, sizes);

    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      // Re-seed from the point farthest from its own centre among clusters
      // that can spare one.
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[result.assignments[i]] < 2) continue;
        const double d = squared_distance(points[i], result.centroids[result.assignments[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) break;
      result.assignments[far] = c;
      recompute_centroids(points, result.assignments, result.centroids, sizes);
    }
    result.objective_trace.push_back(objective(points, result.assignments, result.centroids));
  }
  return result;
}

constexpr std::size_t kRestarts = 10;

}  // namespace

std::size_t count_distinct(std::span<const EnvPoint> points) {
  return std::set<EnvPoint>(points.begin(), points.end()).size();
}

KMeansResult kmeans(std::span<const EnvPoint> points, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DomainError("k-means needs k >= 2");
  if (k > count_distinct(points)) throw DomainError("k-means: k exceeds the number of distinct points");

  // Best of several seeded restarts (lowest final objective, earliest on ties).
  KMeansResult best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < kRestarts; ++r) {
    auto run = lloyd(points, k, derive_seed(seed, r));
    const double obj = objective(points, run.assignments, run.centroids);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(run);
    }
  }
  return best;
}

double dunn_index(std::span<const EnvPoint> points, std::span<const std::size_t> assignments,
                  std::span<const EnvPoint> centroids) {
  const std::size_t k = centroids.size();
  if (k < 2) throw DomainError("Dunn index needs at least 2 clusters");
  if (assignments.size() != points.size()) throw Error("Dunn index: assignment size mismatch");
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignments) {
    if (a >= k) throw Error("Dunn index: assignment out of range");
    ++sizes[a];
  }
  if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
    throw DomainError("Dunn index: empty cluster");
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) min_gap = std::min(min_gap, squared_distance(centroids[a], centroids[b]));
  }
  double max_diameter = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (assignments[i] == assignments[j]) max_diameter = std::max(max_diameter, squared_distance(points[i], points[j]));
    }
  }
  min_gap = std::sqrt(min_gap);
  max_diameter = std::sqrt(max_diameter);
  if (max_diameter == 0.0) return min_gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return min_gap / max_diameter;
}

SelectKResult select_k(std::span<const EnvPoint> points, std::size_t k_min, std::size_t k_max,
                       std::uint64_t seed) {
  if (k_min < 2) throw DomainError("select_k: k_min must be >= 2");
  const std::size_t distinct = count_distinct(points);
  if (distinct < 2) throw DomainError("select_k: fewer than 2 distinct points");
  const std::size_t hi = std::min(k_max, distinct);
  if (hi < k_min) throw DomainError("select_k: k range is empty after capping");

  SelectKResult out;
  double best = -1.0;
  std::size_t best_k = 0;
  KMeansResult degenerate;
  std::size_t degenerate_k = 0;
  for (std::size_t k = k_min; k <= hi; ++k) {
    auto run = kmeans(points, k, derive_seed(seed, k));
    const double d = dunn_index(points, run.assignments, run.centroids);
    out.dunn_by_k.push_back(d);
    if (std::isinf(d)) {
      // Zero-diameter clusterings carry no within-cluster evidence; only used
      // when nothing else is available.
      if (degenerate_k == 0) {
        degenerate_k = k;
        degenerate = std::move(run);
      }
      continue;
    }
    if (d > best) {
      best = d;
      best_k = k;
      out.clustering = std::move(run);
    }
  }
  if (best_k == 0) {
    best_k = degenerate_k;
    out.clustering = std::move(degenerate);
  }
  out.k = best_k;
  return out;
}

Partitioning partition_none(const Dataset& dataset) {
  if (dataset.empty()) throw Error("cannot partition an empty dataset");
  Partitioning out;
  out.scheme = NoLocality{};
  out.ids = ids_of(dataset);
  Partition all{"all", std::vector<std::size_t>(dataset.size())};
  std::iota(all.members.begin(), all.members.end(), 0);
  out.partitions.push_back(std::move(all));
  return out;
}

Partitioning partition_by_factor(const Dataset& dataset, int factor) {
  if (dataset.empty()) throw Error("cannot partition an empty dataset");
  const FactorLevels scheme{factor};
  validate(scheme);
  std::array<std::vector<std::size_t>, 3> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    groups[static_cast<std::size_t>(merge_level(dataset[i].env().score(factor)))].push_back(i);
  }
  Partitioning out;
  out.scheme = scheme;
  out.ids = ids_of(dataset);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) continue;
    out.partitions.push_back({std::string(to_string(static_cast<MergedLevel>(g))), std::move(groups[g])});
  }
  return out;
}

Partitioning partition_by_kmeans(const Dataset& dataset, const KMeansEnv& scheme) {
  validate(scheme);
  if (dataset.empty()) throw Error("cannot partition an empty dataset");
  const auto raw = env_points(dataset);
  auto scaler = preprocess::minmax_fit<kFactorCount>(raw);
  std::vector<EnvPoint> points;
  points.reserve(raw.size());
  for (const auto& p : raw) points.push_back(scaler.apply(p));

  std::size_t k_max = scheme.k_max;
  if (scheme.cap_at_half) k_max = std::min(k_max, dataset.size() / 2);
  auto selected = select_k(points, scheme.k_min, k_max, scheme.seed);

  Partitioning out;
  out.scheme = scheme;
  out.ids = ids_of(dataset);
  for (std::size_t c = 0; c < selected.k; ++c) out.partitions.push_back({"C" + std::to_string(c + 1), {}});
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.partitions[selected.clustering.assignments[i]].members.push_back(i);
  }
  ClusterModel model;
  model.scaler = std::move(scaler);
  model.centroids = selected.clustering.centroids;
  model.k = selected.k;
  model.dunn = dunn_index(points, selected.clustering.assignments, selected.clustering.centroids);
  out.clusters = std::move(model);
  return out;
}

Partitioning build_partitioning(const Dataset& dataset, const PartitionScheme& scheme) {
  validate(scheme);
  if (const auto* f = std::get_if<FactorLevels>(&scheme)) return partition_by_factor(dataset, f->factor);
  if (const auto* km = std::get_if<KMeansEnv>(&scheme)) return partition_by_kmeans(dataset, *km);
  return partition_none(dataset);
}

std::optional<std::size_t> assign(const EnvironmentalAssessment& env, const Partitioning& partitioning) {
  if (const auto* f = std::get_if<FactorLevels>(&partitioning.scheme)) {
    const auto idx = partitioning.find(to_string(merge_level(env.score(f->factor))));
    if (idx == Partitioning::npos) return std::nullopt;
    return idx;
  }
  if (std::holds_alternative<KMeansEnv>(partitioning.scheme)) {
    if (!partitioning.clusters) throw Error("k-means partitioning without a cluster model");
    EnvPoint raw{};
    for (std::size_t f = 0; f < kFactorCount; ++f) raw[f] = env.scores()[f].value();
    return nearest(partitioning.clusters->scaler.apply(raw), partitioning.clusters->centroids);
  }
  if (partitioning.partitions.empty()) return std::nullopt;
  return 0;
}

void write_partitioning_csv(const Partitioning& partitioning, std::ostream& out) {
  std::vector<const std::string*> label(partitioning.ids.size(), nullptr);
  for (const auto& part : partitioning.partitions) {
    for (std::size_t m : part.members) label.at(m) = &part.label;
  }
  out << "id,partition_label\n";
  for (std::size_t i = 0; i < partitioning.ids.size(); ++i) {
    out << partitioning.ids[i] << ',' << (label[i] ? *label[i] : std::string()) << '\n';
  }
}

}  // namespace ucp::locality
