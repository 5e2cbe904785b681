#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucp {

inline constexpr std::size_t kFactorCount = 8;
inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 5;

// Influence level of one environmental factor, 0 (none) .. 5 (strong).
class FactorScore {
 public:
  constexpr FactorScore() = default;
  explicit FactorScore(int value);

  constexpr int value() const noexcept { return value_; }
  friend constexpr auto operator<=>(FactorScore, FactorScore) = default;

 private:
  int value_ = 0;
};

// The eight environmental factor scores E1..E8:
//   E1 RUP familiarity, E2 application experience, E3 OO experience,
//   E4 lead analyst capability, E5 motivation, E6 stable requirements,
//   E7 part-time staff, E8 difficult programming language.
class EnvironmentalAssessment {
 public:
  EnvironmentalAssessment() = default;
  explicit EnvironmentalAssessment(const std::array<int, kFactorCount>& scores);

  // 1-based factor index, matching the E1..E8 naming.
  int score(int factor) const;
  const std::array<FactorScore, kFactorCount>& scores() const noexcept { return scores_; }

  friend bool operator==(const EnvironmentalAssessment&, const EnvironmentalAssessment&) = default;

 private:
  std::array<FactorScore, kFactorCount> scores_{};
};

enum class Source { Industrial, Educational, Synthetic };

std::string_view to_string(Source source);
Source parse_source(std::string_view text);

// Size variables fed to the productivity learners: (UAW, UUCW, TCF, EF).
using FeatureVector = std::array<double, 4>;
inline constexpr std::array<std::string_view, 4> kFeatureNames{"uaw", "uucw", "tcf", "ef"};

// Everything known about a project before its effort is: the inputs a
// predictor sees.
struct ProjectInputs {
  FeatureVector size{};
  EnvironmentalAssessment env;

  double ucp() const;
};

double compute_ucp(double uaw, double uucw, double tcf, double ef);
double compute_pdr(double effort, double ucp);
double compute_effort(double pdr, double ucp);

// EF multiplier implied by the factor scores under the conventional weights
// (1.5, 0.5, 1, 0.5, 1, 2, -1, -1): EF = 1.4 - 0.03 * sum(w_i * e_i).
double conventional_ef(const EnvironmentalAssessment& env);

class Project {
 public:
  Project(std::string id, Source source, double uaw, double uucw, double tcf, double ef,
          EnvironmentalAssessment env, double effort);

  const std::string& id() const noexcept { return id_; }
  Source source() const noexcept { return source_; }
  double uaw() const noexcept { return uaw_; }
  double uucw() const noexcept { return uucw_; }
  double tcf() const noexcept { return tcf_; }
  double ef() const noexcept { return ef_; }
  const EnvironmentalAssessment& env() const noexcept { return env_; }
  double effort() const noexcept { return effort_; }

  double ucp() const noexcept { return ucp_; }
  double pdr() const noexcept { return pdr_; }

  FeatureVector features() const noexcept { return {uaw_, uucw_, tcf_, ef_}; }
  ProjectInputs inputs() const { return {features(), env_}; }

  friend bool operator==(const Project&, const Project&) = default;

 private:
  std::string id_;
  Source source_;
  double uaw_;
  double uucw_;
  double tcf_;
  double ef_;
  EnvironmentalAssessment env_;
  double effort_;
  double ucp_;
  double pdr_;
};

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, std::vector<Project> projects);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return projects_.size(); }
  bool empty() const noexcept { return projects_.empty(); }
  const Project& operator[](std::size_t i) const { return projects_[i]; }
  std::span<const Project> projects() const noexcept { return projects_; }
  auto begin() const noexcept { return projects_.begin(); }
  auto end() const noexcept { return projects_.end(); }

  // Projects at the given positions, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;
  // All projects except the one at `index`.
  Dataset without(std::size_t index) const;

  std::vector<FeatureVector> features() const;
  std::vector<double> pdrs() const;
  std::vector<double> efforts() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::string name_;
  std::vector<Project> projects_;
};

// CSV ingestion. Header `id,source,uaw,uucw,tcf,ef,e1,...,e8,effort` is
// required; columns may appear in any order but each exactly once.
Dataset read_dataset(std::istream& in, std::string name = "dataset");
Dataset load_dataset(const std::string& path);

// Writes the canonical column order with shortest round-trip decimals.
void write_dataset(const Dataset& dataset, std::ostream& out);
void save_dataset(const Dataset& dataset, const std::string& path);

// Seeded synthetic dataset shaped after the published UCP descriptive
// statistics (PDR ~ 18.07 +/- 4.5, right-skewed; heavy-tailed UUCW).
Dataset generate_synthetic(std::uint64_t seed, std::size_t n);

}  // namespace ucp
