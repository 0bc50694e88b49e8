#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gaussmode/errors.hpp"

namespace gaussmode {

/// Round-trip-safe, locale-independent float formatting: 17 significant
/// digits, '.' decimal point, "nan"/"inf" for non-finite values.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// One typed output value. The emitters decide the textual form per format
/// (e.g. NaN prints "nan" in CSV but null in JSON).
struct Cell {
  enum class Kind { Number, Integer, Text, Boolean, Null };
  Kind kind = Kind::Null;
  double num = 0.0;
  long long inum = 0;
  std::string text;
  bool flag = false;

  static Cell number(double v) {
    Cell c;
    c.kind = Kind::Number;
    c.num = v;
    return c;
  }
  static Cell integer(long long v) {
    Cell c;
    c.kind = Kind::Integer;
    c.inum = v;
    return c;
  }
  static Cell string(std::string v) {
    Cell c;
    c.kind = Kind::Text;
    c.text = std::move(v);
    return c;
  }
  static Cell boolean(bool v) {
    Cell c;
    c.kind = Kind::Boolean;
    c.flag = v;
    return c;
  }
  static Cell null() { return Cell{}; }
};

namespace iodetail {

inline std::string csv_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Number: return format_double(c.num);
    case Cell::Kind::Integer: return std::to_string(c.inum);
    case Cell::Kind::Text: return c.text;
    case Cell::Kind::Boolean: return c.flag ? "true" : "false";
    case Cell::Kind::Null: return "nan";
  }
  return "";
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string json_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Number:
      if (!std::isfinite(c.num)) return "null";
      return format_double(c.num);
    case Cell::Kind::Integer: return std::to_string(c.inum);
    case Cell::Kind::Text: return "\"" + json_escape(c.text) + "\"";
    case Cell::Kind::Boolean: return c.flag ? "true" : "false";
    case Cell::Kind::Null: return "null";
  }
  return "null";
}

}  // namespace iodetail

/// Column-ordered table with deterministic emitters. The CSV body (column
/// header row plus data rows, LF endings) is byte-stable for identical
/// inputs; provenance comment lines are the caller's concern.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
      throw SpecInvalid("row width does not match column count");
    rows_.push_back(std::move(row));
  }

  void emit_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) os << ',';
      os << columns_[i];
    }
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << iodetail::csv_cell(row[i]);
      }
      os << '\n';
    }
  }

  void emit_json_object(std::ostream& os, const std::vector<Cell>& row,
                        const char* indent = "") const {
    os << "{";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << "\n" << indent << "  \"" << iodetail::json_escape(columns_[i])
         << "\": " << iodetail::json_cell(row[i]);
    }
    os << "\n" << indent << "}";
  }

  /// JSON array of row objects (or a single object for one-row tables when
  /// single_object is set, as the point command emits).
  void emit_json(std::ostream& os, bool single_object = false) const {
    if (single_object && rows_.size() == 1) {
      emit_json_object(os, rows_[0]);
      os << "\n";
      return;
    }
    os << "[";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r) os << ",";
      os << "\n  ";
      emit_json_object(os, rows_[r], "  ");
    }
    os << "\n]\n";
  }

  void emit_ndjson(std::ostream& os) const {
    for (const auto& row : rows_) {
      os << "{";
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ",";
        os << "\"" << iodetail::json_escape(columns_[i])
           << "\":" << iodetail::json_cell(row[i]);
      }
      os << "}\n";
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace gaussmode
