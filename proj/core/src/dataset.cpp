#include "ucp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ucp/csv.hpp"
#include "ucp/error.hpp"
#include "ucp/rng.hpp"

namespace ucp {

FactorScore::FactorScore(int value) : value_(value) {
  if (value < kMinScore || value > kMaxScore) {
    throw DomainError("factor score " + std::to_string(value) + " outside 0..5");
  }
}

EnvironmentalAssessment::EnvironmentalAssessment(const std::array<int, kFactorCount>& scores) {
  for (std::size_t i = 0; i < kFactorCount; ++i) scores_[i] = FactorScore(scores[i]);
}

int EnvironmentalAssessment::score(int factor) const {
  if (factor < 1 || factor > static_cast<int>(kFactorCount)) {
    throw DomainError("factor index " + std::to_string(factor) + " outside 1..8");
  }
  return scores_[static_cast<std::size_t>(factor - 1)].value();
}

std::string_view to_string(Source source) {
  switch (source) {
    case Source::Industrial: return "industrial";
    case Source::Educational: return "educational";
    case Source::Synthetic: return "synthetic";
  }
  return "synthetic";
}

Source parse_source(std::string_view text) {
  if (text == "industrial") return Source::Industrial;
  if (text == "educational") return Source::Educational;
  if (text == "synthetic") return Source::Synthetic;
  throw DomainError("unknown source '" + std::string(text) +
                    "' (expected industrial, educational or synthetic)");
}

double compute_ucp(double uaw, double uucw, double tcf, double ef) {
  if (!(uaw > 0) || !(uucw > 0) || !(tcf > 0) || !(ef > 0)) {
    throw DomainError("UCP inputs must be strictly positive");
  }
  return (uaw + uucw) * tcf * ef;
}

double compute_pdr(double effort, double ucp) {
  if (!(effort > 0) || !(ucp > 0)) throw DomainError("PDR needs effort > 0 and ucp > 0");
  return effort / ucp;
}

double compute_effort(double pdr, double ucp) {
  if (!(pdr > 0) || !(ucp > 0)) throw DomainError("effort needs pdr > 0 and ucp > 0");
  return pdr * ucp;
}

double ProjectInputs::ucp() const { return compute_ucp(size[0], size[1], size[2], size[3]); }

double conventional_ef(const EnvironmentalAssessment& env) {
  static constexpr std::array<double, kFactorCount> kWeights{1.5, 0.5, 1.0, 0.5, 1.0, 2.0, -1.0, -1.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < kFactorCount; ++i) sum += kWeights[i] * env.scores()[i].value();
  return 1.4 - 0.03 * sum;
}

Project::Project(std::string id, Source source, double uaw, double uucw, double tcf, double ef,
                 EnvironmentalAssessment env, double effort)
    : id_(std::move(id)),
      source_(source),
      uaw_(uaw),
      uucw_(uucw),
      tcf_(tcf),
      ef_(ef),
      env_(env),
      effort_(effort),
      ucp_(0.0),
      pdr_(0.0) {
  if (id_.empty()) throw DomainError("project id must not be empty");
  if (!(uaw > 0)) throw DomainError("uaw must be > 0 (positivity invariant)");
  if (!(uucw > 0)) throw DomainError("uucw must be > 0 (positivity invariant)");
  if (!(tcf > 0)) throw DomainError("tcf must be > 0 (positivity invariant)");
  if (!(ef > 0)) throw DomainError("ef must be > 0 (positivity invariant)");
  if (!(effort > 0)) throw DomainError("effort must be > 0 (positivity invariant)");
  ucp_ = compute_ucp(uaw, uucw, tcf, ef);
  pdr_ = compute_pdr(effort, ucp_);
}

Dataset::Dataset(std::string name, std::vector<Project> projects)
    : name_(std::move(name)), projects_(std::move(projects)) {
  std::unordered_set<std::string> seen;
  for (const auto& p : projects_) {
    if (!seen.insert(p.id()).second) throw DomainError("duplicate project id '" + p.id() + "'");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Project> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(projects_.at(i));
  return Dataset(name_, std::move(out));
}

Dataset Dataset::without(std::size_t index) const {
  std::vector<Project> out;
  out.reserve(projects_.size() - 1);
  for (std::size_t i = 0; i < projects_.size(); ++i) {
    if (i != index) out.push_back(projects_[i]);
  }
  return Dataset(name_, std::move(out));
}

std::vector<FeatureVector> Dataset::features() const {
  std::vector<FeatureVector> out;
  out.reserve(projects_.size());
  for (const auto& p : projects_) out.push_back(p.features());
  return out;
}

std::vector<double> Dataset::pdrs() const {
  std::vector<double> out;
  out.reserve(projects_.size());
  for (const auto& p : projects_) out.push_back(p.pdr());
  return out;
}

std::vector<double> Dataset::efforts() const {
  std::vector<double> out;
  out.reserve(projects_.size());
  for (const auto& p : projects_) out.push_back(p.effort());
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr std::array<std::string_view, 15> kColumns{"id", "source", "uaw", "uucw", "tcf",
                                                   "ef", "e1",     "e2",  "e3",   "e4",
                                                   "e5", "e6",     "e7",  "e8",   "effort"};

double parse_decimal(const std::string& text, std::string_view column, std::size_t row) {
  double v = 0.0;
  if (!parse_double(text, v)) {
    throw RowError(row, "column '" + std::string(column) + "' is not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t\r") != std::string::npos) have_header = true;
  }
  if (!have_header) throw Error("empty dataset file: no header");

  const auto header = split_csv_line(line);
  std::map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto it = std::find(kColumns.begin(), kColumns.end(), header[i]);
    if (it == kColumns.end()) {
      throw SchemaError(header[i], "unexpected column '" + header[i] + "'");
    }
    if (!position.emplace(*it, i).second) {
      throw SchemaError(header[i], "duplicate column '" + header[i] + "'");
    }
  }
  for (auto column : kColumns) {
    if (!position.count(column)) {
      throw SchemaError(std::string(column), "missing column '" + std::string(column) + "'");
    }
  }

  std::vector<Project> projects;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw RowError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    auto field = [&](std::string_view column) -> const std::string& {
      return fields[position.at(column)];
    };
    try {
      std::array<int, kFactorCount> scores{};
      for (std::size_t f = 0; f < kFactorCount; ++f) {
        const std::string column = "e" + std::to_string(f + 1);
        if (!parse_int(field(column), scores[f])) {
          throw RowError(line_no, "column '" + column + "' is not an integer: '" + field(column) + "'");
        }
        if (scores[f] < kMinScore || scores[f] > kMaxScore) {
          throw RowError(line_no, "column '" + column + "' = " + std::to_string(scores[f]) +
                                      " outside 0..5");
        }
      }
      Project project(field("id"), parse_source(field("source")),
                      parse_decimal(field("uaw"), "uaw", line_no),
                      parse_decimal(field("uucw"), "uucw", line_no),
                      parse_decimal(field("tcf"), "tcf", line_no),
                      parse_decimal(field("ef"), "ef", line_no), EnvironmentalAssessment(scores),
                      parse_decimal(field("effort"), "effort", line_no));
      if (!ids.insert(project.id()).second) {
        throw RowError(line_no, "duplicate project id '" + project.id() + "'");
      }
      projects.push_back(std::move(project));
    } catch (const RowError&) {
      throw;
    } catch (const Error& e) {
      throw RowError(line_no, e.what());
    }
  }
  if (projects.empty()) throw Error("dataset has a header but no rows");
  return Dataset(std::move(name), std::move(projects));
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name.erase(0, slash + 1);
  return read_dataset(in, name);
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& p : dataset) {
    out << p.id() << ',' << to_string(p.source()) << ',' << format_double(p.uaw()) << ','
        << format_double(p.uucw()) << ',' << format_double(p.tcf()) << ','
        << format_double(p.ef());
    for (const auto& s : p.env().scores()) out << ',' << s.value();
    out << ',' << format_double(p.effort()) << '\n';
  }
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_dataset(dataset, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Synthetic generator

namespace {

// Published marginal targets.
constexpr double kPdrMean = 18.07;
constexpr double kPdrStdev = 4.5;
constexpr double kPdrSkew = 0.2;
constexpr double kUucwMean = 375.0;
constexpr double kUucwLogSigma = 1.35;
constexpr double kUawLow = 9.75;
constexpr double kUawWidth = 19.0;  // uniform width giving stdev ~5.5
constexpr double kTcfMean = 0.97;
constexpr double kTcfStdev = 0.064;

// Gaussian-copula loadings of the latent PDR driver on project size and on
// the (unfavourable) environment latent.
constexpr double kPdrSizeLoading = 0.47;
constexpr double kPdrEnvLoading = 0.45;
constexpr double kEnvLoading = 0.4;

// Shifted log-normal X = shift + exp(mu + sigma * Z) with a given mean,
// stdev and skewness. Skewness of the log-normal part is (w + 2) sqrt(w - 1)
// with w = exp(sigma^2); solve for w by bisection.
struct ShiftedLogNormal {
  double shift;
  double mu;
  double sigma;
};

ShiftedLogNormal fit_shifted_lognormal(double mean, double stdev, double skew) {
  double lo = 1.0;
  double hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((mid + 2.0) * std::sqrt(mid - 1.0) < skew ? lo : hi) = mid;
  }
  const double w = 0.5 * (lo + hi);
  const double sigma = std::sqrt(std::log(w));
  const double scale_mean = stdev / std::sqrt(w - 1.0);
  return {mean - scale_mean, std::log(scale_mean) - 0.5 * sigma * sigma, sigma};
}

double round_to_step(double x, double step) { return std::round(x / step) * step; }

// Dividing by the power of ten keeps e.g. 0.97 as the nearest double to 0.97.
double round_decimals(double x, double scale) { return std::round(x * scale) / scale; }

int draw_score(Rng& rng, double centre, double env_shift) {
  const double raw = centre + env_shift + rng.normal();
  return static_cast<int>(std::clamp(std::lround(raw), static_cast<long>(kMinScore),
                                     static_cast<long>(kMaxScore)));
}

}  // namespace

Dataset generate_synthetic(std::uint64_t seed, std::size_t n) {
  if (n < 10) throw DomainError("synthetic dataset needs n >= 10");
  const auto pdr_law = fit_shifted_lognormal(kPdrMean, kPdrStdev, kPdrSkew);
  const double uucw_mu = std::log(kUucwMean) - 0.5 * kUucwLogSigma * kUucwLogSigma;
  const double residual_loading =
      std::sqrt(1.0 - kPdrSizeLoading * kPdrSizeLoading - kPdrEnvLoading * kPdrEnvLoading);

  Rng rng(seed);
  std::vector<Project> projects;
  projects.reserve(n);
  const int width = std::max<int>(4, static_cast<int>(std::to_string(n).size()));
  for (std::size_t i = 0; i < n; ++i) {
    const double z_size = rng.normal();
    const double z_env = rng.normal();

    const double uucw = std::max(5.0, round_to_step(std::exp(uucw_mu + kUucwLogSigma * z_size), 5.0));
    const double uaw = std::round(kUawLow + kUawWidth * rng.uniform());
    const double tcf = round_decimals(std::clamp(kTcfMean + kTcfStdev * rng.normal(), 0.6, 1.3), 1000.0);

    std::array<int, kFactorCount> scores{};
    for (std::size_t f = 0; f < 6; ++f) scores[f] = draw_score(rng, 3.15, -kEnvLoading * z_env);
    for (std::size_t f = 6; f < kFactorCount; ++f) scores[f] = draw_score(rng, 2.85, kEnvLoading * z_env);
    const EnvironmentalAssessment env(scores);
    const double ef = round_decimals(conventional_ef(env), 1000.0);

    double pdr = 0.0;
    do {
      const double z = kPdrSizeLoading * z_size + kPdrEnvLoading * z_env + residual_loading * rng.normal();
      pdr = pdr_law.shift + std::exp(pdr_law.mu + pdr_law.sigma * z);
    } while (pdr < 2.0);

    const double ucp = compute_ucp(uaw, uucw, tcf, ef);
    const double effort = std::max(0.1, round_decimals(compute_effort(pdr, ucp), 10.0));

    std::string id = std::to_string(i + 1);
    id.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0');
    projects.emplace_back("S" + id, Source::Synthetic, uaw, uucw, tcf, ef, env, effort);
  }
  return Dataset("synthetic-" + std::to_string(seed) + "-" + std::to_string(n), std::move(projects));
}

}  // namespace ucp
