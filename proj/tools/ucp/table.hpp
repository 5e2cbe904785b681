#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "ucp/report.hpp"

namespace ucp::cli {

// Missing numbers (undefined statistics) render as "nan" in CSV, null in JSON
// and "n/a" in Markdown.
using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

void write_table(const Table& table, eval::Format format, std::ostream& out);

}  // namespace ucp::cli
