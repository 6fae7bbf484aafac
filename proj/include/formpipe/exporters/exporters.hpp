#pragma once

#include <string>
#include <vector>

#include "formpipe/records/records.hpp"

namespace formpipe::exporters {

// RFC-4180 CSV, LF line endings, UTF-8. Missing renders as NaN in numeric
// columns and empty in text columns.
std::string to_csv(const std::vector<records::Row>& rows, const records::TableSchema& schema);

// Inverse mapping used by round-trip checks: NaN/empty come back as Missing.
std::vector<records::Row> parse_csv(const std::string& csv, const records::TableSchema& schema);

// Portable SQL-92-subset dump: CREATE TABLE with double-quoted identifiers,
// then INSERTs. Missing -> NULL.
std::string to_sql_dump(
    const std::vector<std::pair<records::TableSchema, std::vector<records::Row>>>& tables);

// Cell -> literal helpers shared with the JSON writer.
std::string sql_quote_ident(const std::string& name);
std::string sql_literal(const records::Cell& cell);

// Shortest round-trip decimal for Real cells (what JSON output uses too).
std::string format_real(double v);

}  // namespace formpipe::exporters
