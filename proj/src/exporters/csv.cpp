#include <charconv>
#include <cstdlib>
#include <cstring>

#include "formpipe/exporters/exporters.hpp"

namespace formpipe::exporters {

std::string format_real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_field(const records::Cell& c, const records::Column& col) {
  using T = records::Cell::Type;
  switch (c.type) {
    case T::Null:
      return col.affinity == records::Affinity::Text ? "" : "NaN";
    case T::Int:
      return std::to_string(c.i);
    case T::Real:
      return format_real(c.r);
    case T::Bool:
      return c.b ? "1" : "0";
    case T::Text: {
      if (!needs_quoting(c.s)) return c.s;
      std::string out = "\"";
      for (char ch : c.s) {
        out += ch;
        if (ch == '"') out += '"';
      }
      out += '"';
      return out;
    }
  }
  return "";
}

}  // namespace

std::string to_csv(const std::vector<records::Row>& rows, const records::TableSchema& schema) {
  std::string out;
  for (size_t i = 0; i < schema.columns.size(); ++i) {
    if (i) out += ',';
    out += schema.columns[i].name;
  }
  out += '\n';
  for (const records::Row& row : rows) {
    if (row.size() != schema.columns.size())
      throw records::RecordError(records::RecordError::Code::SchemaMismatch,
                                 "row width " + std::to_string(row.size()) + " != schema " +
                                     std::to_string(schema.columns.size()) + " for table " +
                                     schema.table_name);
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i], schema.columns[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<records::Row> parse_csv(const std::string& csv, const records::TableSchema& schema) {
  // Field splitter honoring quotes; rows end on LF outside quotes.
  std::vector<std::vector<std::string>> raw_rows;
  std::vector<std::string> cur;
  std::string field;
  bool in_quotes = false;
  for (size_t i = 0; i < csv.size(); ++i) {
    char c = csv[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cur.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      cur.push_back(std::move(field));
      field.clear();
      raw_rows.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !cur.empty()) {
    cur.push_back(std::move(field));
    raw_rows.push_back(std::move(cur));
  }

  std::vector<records::Row> rows;
  bool header = true;
  for (const auto& raw : raw_rows) {
    if (header) {  // header row carries column names
      header = false;
      continue;
    }
    records::Row row;
    for (size_t i = 0; i < raw.size() && i < schema.columns.size(); ++i) {
      const records::Column& col = schema.columns[i];
      const std::string& v = raw[i];
      if (col.affinity == records::Affinity::Text) {
        row.push_back(v.empty() ? records::Cell::null() : records::Cell::text(v));
      } else if (v == "NaN" || v.empty()) {
        row.push_back(records::Cell::null());
      } else if (col.affinity == records::Affinity::Integer) {
        row.push_back(records::Cell::integer(std::atoll(v.c_str())));
      } else {
        // Real column: integral text still reads back as the integer cell it
        // was written from, preserving the round trip.
        if (v.find_first_of(".eE") == std::string::npos)
          row.push_back(records::Cell::integer(std::atoll(v.c_str())));
        else
          row.push_back(records::Cell::real(std::strtod(v.c_str(), nullptr)));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace formpipe::exporters
