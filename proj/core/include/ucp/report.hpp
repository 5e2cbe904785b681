#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucp/evaluation.hpp"

namespace ucp::eval {

enum class Format { Csv, Json, Md };

Format parse_format(std::string_view text);
std::string_view extension(Format format);

struct CellMarks {
  bool row_best = false;     // best model for this scheme and metric
  bool column_best = false;  // best scheme for this model and metric
};

// [scheme][model][metric] over the locality grid, metrics in mae, mbre,
// mibre order. Lower is better; ties mark every tied cell.
using LocalityMarks = std::vector<std::array<std::array<CellMarks, 3>, kLocalityModels.size()>>;
LocalityMarks locality_marks(const BenchmarkResult& result);
// [model][metric]: best model per metric in the no-locality table.
std::array<std::array<bool, 3>, kNoLocalityModels.size()> no_locality_marks(const BenchmarkResult& result);

// Markdown renders row-best cells in italics and column-best cells in bold.
void write_locality_table(const BenchmarkResult& result, Format format, std::ostream& out);
void write_no_locality_table(const BenchmarkResult& result, Format format, std::ostream& out);

// `scheme,model,test_id,partition,fallback,ucp,predicted_pdr,predicted_effort,actual_effort`
void write_traces_csv(std::span<const EvaluationReport> reports, std::ostream& out);
// `scheme,test_id,model,w_mae,w_mbre,w_mibre,w` for ensemble reports.
void write_fold_weights_csv(std::span<const EvaluationReport> reports, std::ostream& out);

std::string report_to_json(const EvaluationReport& report);

}  // namespace ucp::eval
