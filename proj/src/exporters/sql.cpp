#include "formpipe/exporters/exporters.hpp"

namespace formpipe::exporters {

std::string sql_quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string sql_literal(const records::Cell& cell) {
  using T = records::Cell::Type;
  switch (cell.type) {
    case T::Null:
      return "NULL";
    case T::Int:
      return std::to_string(cell.i);
    case T::Real:
      return format_real(cell.r);
    case T::Bool:
      return cell.b ? "1" : "0";
    case T::Text: {
      std::string out = "'";
      for (char c : cell.s) {
        out += c;
        if (c == '\'') out += '\'';
      }
      out += '\'';
      return out;
    }
  }
  return "NULL";
}

namespace {

const char* sql_type(records::Affinity a) {
  switch (a) {
    case records::Affinity::Integer:
      return "INTEGER";
    case records::Affinity::Real:
      return "DOUBLE PRECISION";
    case records::Affinity::Text:
      return "VARCHAR(4000)";
  }
  return "VARCHAR(4000)";
}

}  // namespace

std::string to_sql_dump(
    const std::vector<std::pair<records::TableSchema, std::vector<records::Row>>>& tables) {
  std::string out = "-- SQL dump (SQL-92 subset)\n";
  for (const auto& [schema, rows] : tables) {
    out += "CREATE TABLE " + sql_quote_ident(schema.table_name) + " (";
    for (size_t i = 0; i < schema.columns.size(); ++i) {
      const records::Column& c = schema.columns[i];
      if (i) out += ", ";
      out += sql_quote_ident(c.name);
      out += ' ';
      out += sql_type(c.affinity);
      if (!c.nullable) out += " NOT NULL";
    }
    out += ");\n";
    for (const records::Row& row : rows) {
      if (row.size() != schema.columns.size())
        throw records::RecordError(records::RecordError::Code::SchemaMismatch,
                                   "row width mismatch for table " + schema.table_name);
      out += "INSERT INTO " + sql_quote_ident(schema.table_name) + " VALUES (";
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out += ", ";
        out += sql_literal(row[i]);
      }
      out += ");\n";
    }
  }
  return out;
}

}  // namespace formpipe::exporters
