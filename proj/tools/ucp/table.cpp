#include "ucp/table.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"
#include "ucp/csv.hpp"
#include "ucp/error.hpp"

namespace ucp::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("table '" + title + "': row width does not match header");
  rows.push_back(std::move(row));
}

namespace {

std::string csv_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

std::string md_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_fixed(*d, 4) : "n/a";
  return csv_cell(c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nullptr;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<bool>(c);
}

}  // namespace

void write_table(const Table& table, eval::Format format, std::ostream& out) {
  switch (format) {
    case eval::Format::Csv:
      for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
      out << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_cell(row[j]);
        out << '\n';
      }
      break;
    case eval::Format::Json: {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        for (std::size_t j = 0; j < row.size(); ++j) r[table.columns[j]] = json_cell(row[j]);
        rows.push_back(std::move(r));
      }
      out << nlohmann::ordered_json{{"title", table.title}, {"rows", std::move(rows)}}.dump(2) << '\n';
      break;
    }
    case eval::Format::Md:
      if (!table.title.empty()) out << table.title << "\n\n";
      out << '|';
      for (const auto& c : table.columns) out << ' ' << c << " |";
      out << "\n|";
      for (std::size_t j = 0; j < table.columns.size(); ++j) out << "---|";
      out << '\n';
      for (const auto& row : table.rows) {
        out << '|';
        for (const auto& c : row) out << ' ' << md_cell(c) << " |";
        out << '\n';
      }
      break;
  }
}

}  // namespace ucp::cli
