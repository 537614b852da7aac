#pragma once

#include <cstddef>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltd/error.hpp"
#include "ltd/text.hpp"

namespace ltd {

/// An in-memory relational table of opaque text cells. Immutable after load.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // each row has columns.size() cells

  friend bool operator==(const Table&, const Table&) = default;

  std::size_t column_index(const std::string& column) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == column) return i;
    throw std::invalid_argument("table \"" + name + "\" has no column \"" + column +
                                "\" (available: " + detail::join(columns, ", ") + ")");
  }
};

/// Names one column of one table; the table is identified by name.
struct ColumnRef {
  std::string table;
  std::string column;
};

namespace detail {

struct CsvRecord {
  std::vector<std::string> cells;
  std::size_t line = 0;  // 1-based line the record starts on
};

// RFC-4180-style state machine: quoted fields may contain the delimiter,
// doubled quotes and line breaks. Accepts LF, CRLF and lone CR record ends.
// Cells come out trimmed; blank lines produce no record.
inline std::vector<CsvRecord> parse_csv(std::string_view data, char delimiter) {
  std::vector<CsvRecord> records;
  std::vector<std::string> cells;
  std::string field;
  bool quoted = false;            // inside a quoted field right now
  bool field_was_quoted = false;  // current field used quotes
  bool record_has_quote = false;
  std::size_t line = 1, record_line = 1;

  auto end_field = [&] {
    cells.push_back(trim(field));
    field.clear();
    record_has_quote = record_has_quote || field_was_quoted;
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    bool blank = cells.size() == 1 && cells[0].empty() && !record_has_quote;
    if (!blank) records.push_back({std::move(cells), record_line});
    cells.clear();
    record_has_quote = false;
    record_line = line;
  };

  std::size_t i = 0;
  while (i < data.size()) {
    char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"' && trim(field).empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
      field.clear();
      ++i;
      continue;
    }
    if (c == delimiter) {
      end_field();
      ++i;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      ++i;
      ++line;
      end_record();
    } else {
      if (field_was_quoted && !is_space(c))
        throw ParseError("row " + std::to_string(record_line) +
                             ": unexpected character after closing quote",
                         record_line);
      if (!field_was_quoted) field += c;
      ++i;
    }
  }
  if (quoted)
    throw ParseError("row " + std::to_string(record_line) + ": unterminated quoted field",
                     record_line);
  if (!field.empty() || field_was_quoted || !cells.empty()) end_record();
  return records;
}

}  // namespace detail

/// Loads a delimiter-separated table. The first record is the header; cells
/// are trimmed; a UTF-8 byte-order mark is tolerated and stripped.
inline Table load_table(std::istream& in, std::string name, char delimiter = ',') {
  std::string data(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
  if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);

  auto records = detail::parse_csv(data, delimiter);
  if (records.empty()) throw ParseError("missing header row");

  Table t;
  t.name = std::move(name);
  std::set<std::string> seen;
  for (auto& cell : records[0].cells) {
    std::string column = detail::trim(cell);
    if (column.empty())
      throw ParseError("empty header name at column " + std::to_string(t.columns.size() + 1), 1);
    if (!seen.insert(column).second)
      throw ParseError("duplicate header \"" + column + "\"", 1);
    t.columns.push_back(std::move(column));
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.cells.size() != t.columns.size())
      throw ParseError("row " + std::to_string(rec.line) + ": expected " +
                           std::to_string(t.columns.size()) + " cells, got " +
                           std::to_string(rec.cells.size()),
                       rec.line);
    t.rows.push_back(std::move(rec.cells));
  }
  return t;
}

inline Table load_table(std::string_view data, std::string name, char delimiter = ',') {
  std::istringstream in{std::string(data)};
  return load_table(in, std::move(name), delimiter);
}

inline void serialize_table(const Table& t, std::ostream& out, char delimiter = ',') {
  auto write_cell = [&](const std::string& cell, bool force_quotes) {
    bool needs_quotes = force_quotes || cell.find(delimiter) != std::string::npos ||
                        cell.find('"') != std::string::npos ||
                        cell.find('\n') != std::string::npos ||
                        cell.find('\r') != std::string::npos;
    if (!needs_quotes) {
      out << cell;
      return;
    }
    out << '"';
    for (char c : cell) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  };
  auto write_record = [&](const std::vector<std::string>& cells) {
    // A lone empty cell is quoted so the record does not vanish on reload.
    bool force = cells.size() == 1 && cells[0].empty();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << delimiter;
      write_cell(cells[i], force);
    }
    out << '\n';
  };
  write_record(t.columns);
  for (const auto& row : t.rows) write_record(row);
}

inline std::string serialize_table(const Table& t, char delimiter = ',') {
  std::ostringstream out;
  serialize_table(t, out, delimiter);
  return out.str();
}

/// Cells of one column in row order as (0-based row index, cell) pairs.
inline std::vector<std::pair<std::size_t, std::string>> column_values(const Table& t,
                                                                      const std::string& column) {
  std::size_t col = t.column_index(column);
  std::vector<std::pair<std::size_t, std::string>> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) out.emplace_back(r, t.rows[r][col]);
  return out;
}

inline std::vector<std::pair<std::size_t, std::string>> column_values(const Table& t,
                                                                      const ColumnRef& ref) {
  return column_values(t, ref.column);
}

/// One stored (already trimmed) cell.
inline const std::string& project(const Table& t, std::size_t row, const std::string& column) {
  if (row >= t.rows.size())
    throw std::out_of_range("table \"" + t.name + "\": row index " + std::to_string(row) +
                            " out of range (rows: " + std::to_string(t.rows.size()) + ")");
  return t.rows[row][t.column_index(column)];
}

}  // namespace ltd
