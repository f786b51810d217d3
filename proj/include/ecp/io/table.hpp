#pragma once

// Column-oriented result tables and their CSV / JSON serialization.
//
// CSV layout: one "# key: value" line per metadata entry, one column-name
// row, then data rows. Floating-point cells are written in scientific notation
// with 17 significant digits (round-trip exact); non-finite values as inf/-inf/nan.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ecp/casimir.hpp"
#include "ecp/errors.hpp"

namespace ecp::io {

using Cell = std::variant<std::int64_t, double, std::string>;

struct MetadataEntry {
  std::string key;
  std::string value;
};

struct Table {
  std::vector<MetadataEntry> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw config_error("no column named '" + std::string(name) + "'");
  }
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw config_error("not a number: '" + std::string(text) + "'");
  return v;
}

inline std::int64_t parse_integer(std::string_view text) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw config_error("not an integer: '" + std::string(text) + "'");
  return v;
}

inline std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<T, std::int64_t>)
          return std::to_string(v);
        else
          return v;
      },
      cell);
}

inline void write_csv(std::ostream& out, const Table& table) {
  for (const auto& m : table.metadata) out << "# " << m.key << ": " << m.value << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

inline void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  auto meta = nlohmann::ordered_json::array();
  for (const auto& m : table.metadata) meta.push_back({{"key", m.key}, {"value", m.value}});
  doc["metadata"] = std::move(meta);
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v))
                r.push_back(v);
              else
                r.push_back(format_double(v));
            } else {
              r.push_back(v);
            }
          },
          cell);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

/// Raw CSV contents: metadata lines and string cells.
struct CsvDocument {
  std::vector<MetadataEntry> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw config_error("no column named '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline CsvDocument read_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  bool have_columns = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      auto value = line.substr(colon + 1);
      if (!value.empty() && value[0] == ' ') value.erase(0, 1);
      doc.metadata.push_back({line.substr(2, colon - 2), value});
      continue;
    }
    auto cells = split(line, ',');
    if (!have_columns) {
      doc.columns = std::move(cells);
      have_columns = true;
      continue;
    }
    if (cells.size() != doc.columns.size())
      throw config_error("CSV line " + std::to_string(line_no) + " has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(doc.columns.size()));
    doc.rows.push_back(std::move(cells));
  }
  return doc;
}

struct ForceSeries {
  double J = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  ForceCurve curve;
};

/// Force-sweep CSV back into curves, one per consecutive (J, delta) block.
inline std::vector<ForceSeries> read_force_series(std::istream& in) {
  const auto doc = read_csv(in);
  const auto iJ = doc.column_index("J");
  const auto iD = doc.column_index("delta");
  const auto iL = doc.column_index("lambda");
  const auto iR = doc.column_index("R");
  const auto iE = doc.column_index("E_cp");
  const auto iF = doc.column_index("f");
  std::vector<ForceSeries> out;
  for (const auto& row : doc.rows) {
    const double J = parse_double(row[iJ]);
    const double delta = parse_double(row[iD]);
    if (out.empty() || out.back().J != J || out.back().delta != delta)
      out.push_back({J, delta, parse_double(row[iL]), {}});
    out.back().curve.records.push_back({static_cast<int>(parse_integer(row[iR])),
                                        parse_double(row[iE]), parse_double(row[iF])});
  }
  return out;
}

}  // namespace ecp::io
