#include "ucp/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "ucp/csv.hpp"
#include "ucp/error.hpp"

namespace ucp::eval {

using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 3> kMetricNames{"mae", "mbre", "mibre"};

double metric(const MetricTriple& m, std::size_t i) { return i == 0 ? m.mae : i == 1 ? m.mbre : m.mibre; }

std::string md_value(double v, std::size_t metric_index) { return format_fixed(v, metric_index == 0 ? 2 : 4); }

std::string md_cell(double v, std::size_t metric_index, bool italic, bool bold) {
  std::string s = md_value(v, metric_index);
  if (italic) s = "_" + s + "_";
  if (bold) s = "**" + s + "**";
  return s;
}

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::size_t scheme_count(const BenchmarkResult& r) {
  if (r.locality.size() % kLocalityModels.size() != 0) throw Error("benchmark locality grid is ragged");
  return r.locality.size() / kLocalityModels.size();
}

const EvaluationReport& cell(const BenchmarkResult& r, std::size_t scheme, std::size_t model) {
  return r.locality.at(scheme * kLocalityModels.size() + model);
}

ordered_json weights_json(const ensemble::EnsembleWeights& w) {
  ordered_json models = ordered_json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& m = w.models[i];
    models.push_back({{"model", to_string(ensemble::kMembers[i])},
                      {"w_mae", m.w_mae},
                      {"w_mbre", m.w_mbre},
                      {"w_mibre", m.w_mibre},
                      {"w", m.w}});
  }
  return models;
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "md") return Format::Md;
  throw DomainError("unknown format '" + std::string(text) + "' (expected csv, json, md)");
}

std::string_view extension(Format format) {
  switch (format) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Md: return "md";
  }
  return "txt";
}

LocalityMarks locality_marks(const BenchmarkResult& result) {
  const std::size_t rows = scheme_count(result);
  constexpr std::size_t cols = kLocalityModels.size();
  LocalityMarks marks(rows);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t s = 0; s < rows; ++s) {
      double best = INFINITY;
      for (std::size_t m = 0; m < cols; ++m) best = std::min(best, metric(cell(result, s, m).metrics, k));
      for (std::size_t m = 0; m < cols; ++m) marks[s][m][k].row_best = metric(cell(result, s, m).metrics, k) == best;
    }
    for (std::size_t m = 0; m < cols; ++m) {
      double best = INFINITY;
      for (std::size_t s = 0; s < rows; ++s) best = std::min(best, metric(cell(result, s, m).metrics, k));
      for (std::size_t s = 0; s < rows; ++s) {
        marks[s][m][k].column_best = metric(cell(result, s, m).metrics, k) == best;
      }
    }
  }
  return marks;
}

std::array<std::array<bool, 3>, kNoLocalityModels.size()> no_locality_marks(const BenchmarkResult& result) {
  if (result.no_locality.size() != kNoLocalityModels.size()) throw Error("benchmark no-locality table is incomplete");
  std::array<std::array<bool, 3>, kNoLocalityModels.size()> marks{};
  for (std::size_t k = 0; k < 3; ++k) {
    double best = INFINITY;
    for (const auto& r : result.no_locality) best = std::min(best, metric(r.metrics, k));
    for (std::size_t m = 0; m < marks.size(); ++m) marks[m][k] = metric(result.no_locality[m].metrics, k) == best;
  }
  return marks;
}

void write_locality_table(const BenchmarkResult& result, Format format, std::ostream& out) {
  const auto marks = locality_marks(result);
  const std::size_t rows = marks.size();
  switch (format) {
    case Format::Csv: {
      out << "scheme";
      for (auto m : kLocalityModels) {
        for (auto k : kMetricNames) out << ',' << to_string(m) << '_' << k;
      }
      out << '\n';
      for (std::size_t s = 0; s < rows; ++s) {
        out << cell(result, s, 0).scheme;
        for (std::size_t m = 0; m < kLocalityModels.size(); ++m) {
          for (std::size_t k = 0; k < 3; ++k) out << ',' << format_double(metric(cell(result, s, m).metrics, k));
        }
        out << '\n';
      }
      break;
    }
    case Format::Json: {
      ordered_json j;
      j["dataset"] = result.dataset;
      j["seed"] = result.seed;
      j["models"] = ordered_json::array();
      for (auto m : kLocalityModels) j["models"].push_back(to_string(m));
      ordered_json rows_json = ordered_json::array();
      for (std::size_t s = 0; s < rows; ++s) {
        ordered_json row;
        row["scheme"] = cell(result, s, 0).scheme;
        for (std::size_t m = 0; m < kLocalityModels.size(); ++m) {
          ordered_json c;
          for (std::size_t k = 0; k < 3; ++k) {
            c[std::string(kMetricNames[k])] = {{"value", num(metric(cell(result, s, m).metrics, k))},
                                               {"row_best", marks[s][m][k].row_best},
                                               {"column_best", marks[s][m][k].column_best}};
          }
          row[std::string(to_string(kLocalityModels[m]))] = std::move(c);
        }
        rows_json.push_back(std::move(row));
      }
      j["rows"] = std::move(rows_json);
      out << j.dump(2) << '\n';
      break;
    }
    case Format::Md: {
      out << "Locality results (dataset " << result.dataset << ", seed " << result.seed
          << "). _Italic_: best model in the row; **bold**: best scheme in the column.\n\n";
      out << "| scheme |";
      for (auto m : kLocalityModels) {
        for (auto k : kMetricNames) out << ' ' << to_string(m) << ' ' << k << " |";
      }
      out << "\n|---|";
      for (std::size_t i = 0; i < kLocalityModels.size() * 3; ++i) out << "---:|";
      out << '\n';
      for (std::size_t s = 0; s < rows; ++s) {
        out << "| " << cell(result, s, 0).scheme << " |";
        for (std::size_t m = 0; m < kLocalityModels.size(); ++m) {
          for (std::size_t k = 0; k < 3; ++k) {
            out << ' '
                << md_cell(metric(cell(result, s, m).metrics, k), k, marks[s][m][k].row_best,
                           marks[s][m][k].column_best)
                << " |";
          }
        }
        out << '\n';
      }
      break;
    }
  }
}

void write_no_locality_table(const BenchmarkResult& result, Format format, std::ostream& out) {
  const auto marks = no_locality_marks(result);
  switch (format) {
    case Format::Csv: {
      out << "model,mae,mbre,mibre\n";
      for (const auto& r : result.no_locality) {
        out << to_string(r.model) << ',' << format_double(r.metrics.mae) << ',' << format_double(r.metrics.mbre)
            << ',' << format_double(r.metrics.mibre) << '\n';
      }
      break;
    }
    case Format::Json: {
      ordered_json j;
      j["dataset"] = result.dataset;
      j["seed"] = result.seed;
      ordered_json rows = ordered_json::array();
      for (std::size_t m = 0; m < result.no_locality.size(); ++m) {
        const auto& r = result.no_locality[m];
        ordered_json row;
        row["model"] = to_string(r.model);
        for (std::size_t k = 0; k < 3; ++k) {
          row[std::string(kMetricNames[k])] = {{"value", num(metric(r.metrics, k))}, {"best", marks[m][k]}};
        }
        rows.push_back(std::move(row));
      }
      j["rows"] = std::move(rows);
      out << j.dump(2) << '\n';
      break;
    }
    case Format::Md: {
      out << "No-locality results (dataset " << result.dataset << ", seed " << result.seed
          << "). **Bold**: best model per metric.\n\n";
      out << "| model | mae | mbre | mibre |\n|---|---:|---:|---:|\n";
      for (std::size_t m = 0; m < result.no_locality.size(); ++m) {
        const auto& r = result.no_locality[m];
        out << "| " << to_string(r.model) << " |";
        for (std::size_t k = 0; k < 3; ++k) out << ' ' << md_cell(metric(r.metrics, k), k, false, marks[m][k]) << " |";
        out << '\n';
      }
      break;
    }
  }
}

void write_traces_csv(std::span<const EvaluationReport> reports, std::ostream& out) {
  out << "scheme,model,test_id,partition,fallback,ucp,predicted_pdr,predicted_effort,actual_effort\n";
  for (const auto& r : reports) {
    for (const auto& f : r.folds) {
      out << f.scheme << ',' << to_string(r.model) << ',' << f.test_id << ',' << f.partition << ','
          << (f.fallback ? "true" : "false") << ',' << format_double(f.ucp) << ',' << format_double(f.predicted_pdr)
          << ',' << format_double(f.predicted_effort) << ',' << format_double(f.actual_effort) << '\n';
    }
  }
}

void write_fold_weights_csv(std::span<const EvaluationReport> reports, std::ostream& out) {
  out << "scheme,test_id,model,w_mae,w_mbre,w_mibre,w\n";
  for (const auto& r : reports) {
    for (const auto& f : r.folds) {
      if (!f.weights) continue;
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& w = f.weights->models[i];
        out << f.scheme << ',' << f.test_id << ',' << to_string(ensemble::kMembers[i]) << ','
            << format_double(w.w_mae) << ',' << format_double(w.w_mbre) << ',' << format_double(w.w_mibre) << ','
            << format_double(w.w) << '\n';
      }
    }
  }
}

std::string report_to_json(const EvaluationReport& report) {
  ordered_json j;
  j["dataset"] = report.dataset;
  j["scheme"] = report.scheme;
  j["model"] = to_string(report.model);
  j["seed"] = report.seed;
  j["metrics"] = {{"mae", num(report.metrics.mae)}, {"mbre", num(report.metrics.mbre)},
                  {"mibre", num(report.metrics.mibre)}};
  const auto& c = report.config;
  const auto& svr = c.model.learners.svr;
  j["config"] = {{"min_local", c.min_local},
                 {"pdr_floor", c.pdr_floor},
                 {"alpha", c.model.ensemble.alpha},
                 {"svr", {{"c", svr.c}, {"epsilon", svr.epsilon}, {"gamma", svr.gamma ? num(*svr.gamma) : "auto"},
                          {"tol", svr.tol}}},
                 {"cart", {{"min_split", c.model.learners.cart.min_split},
                           {"min_leaf", c.model.learners.cart.min_leaf},
                           {"max_depth", c.model.learners.cart.max_depth}}},
                 {"stepwise", {{"alpha_remove", c.model.learners.stepwise.alpha_remove}}}};
  ordered_json folds = ordered_json::array();
  for (const auto& f : report.folds) {
    ordered_json fj;
    fj["test_id"] = f.test_id;
    fj["partition"] = f.partition;
    fj["fallback"] = f.fallback;
    fj["ucp"] = num(f.ucp);
    fj["predicted_pdr"] = num(f.predicted_pdr);
    fj["predicted_effort"] = num(f.predicted_effort);
    fj["actual_effort"] = num(f.actual_effort);
    if (f.member_pdrs) {
      ordered_json members;
      for (std::size_t i = 0; i < 3; ++i) members[std::string(to_string(ensemble::kMembers[i]))] = num((*f.member_pdrs)[i]);
      fj["member_pdrs"] = std::move(members);
    }
    if (f.weights) fj["weights"] = weights_json(*f.weights);
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);
  return j.dump(2) + "\n";
}

}  // namespace ucp::eval
