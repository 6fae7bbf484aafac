#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "formpipe/detect/checkbox.hpp"
#include "formpipe/grammar/grammar.hpp"

namespace formpipe::records {

// One exported value. Missing stays distinct from 0 at every layer.
struct Cell {
  enum class Type { Null, Int, Real, Text, Bool };
  Type type = Type::Null;
  long long i = 0;
  double r = 0;
  std::string s;
  bool b = false;

  static Cell null() { return {}; }
  static Cell integer(long long v) { Cell c; c.type = Type::Int; c.i = v; return c; }
  static Cell real(double v) { Cell c; c.type = Type::Real; c.r = v; return c; }
  static Cell text(std::string v) { Cell c; c.type = Type::Text; c.s = std::move(v); return c; }
  static Cell boolean(bool v) { Cell c; c.type = Type::Bool; c.b = v; return c; }
  static Cell from_field(const grammar::FieldValue& v);

  bool is_null() const { return type == Type::Null; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

using Row = std::vector<Cell>;

enum class Affinity { Integer, Real, Text };

struct Column {
  std::string name;
  Affinity affinity = Affinity::Text;
  bool nullable = true;
};

struct TableSchema {
  std::string table_name;
  std::vector<Column> columns;
  std::string primary_key;  // optional

  int column_index(const std::string& name) const;
};

// -- Typed records ----------------------------------------------------------

struct VitalsSeriesRow {
  int minute = 0;
  std::string timestamp;  // "YYYY-MM-DD HH:MM ZONE", zone carried verbatim
  std::optional<int> hr, bp_systolic, bp_diastolic, map, rr, sao2;
};

struct PreOpRecord {
  grammar::RowBindings fields;            // every scalar token, typed
  std::string heparin;                    // "Yes", "No", or "" (Missing); derived
  std::optional<bool> heparin_checkbox;   // raw drawn state, when observed
  std::vector<std::string> warnings;
};

struct LiverDataRecord {
  grammar::RowBindings fields;
  std::vector<std::pair<std::string, bool>> checkboxes;  // 8, reading order
  std::vector<std::string> warnings;
};

struct DocumentMeta {
  std::string source_file;
  int page_count = 0;
  std::string generated_at;   // empty = Missing
  std::string version_note;   // empty = Missing
};

class RecordError : public std::runtime_error {
public:
  enum class Code { CheckboxCountMismatch, SchemaMismatch };
  RecordError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

// Geometry needed to turn grid-cell anchor hints into page points.
struct AnchorContext {
  double col_pitch = 6.0;
  double row_pitch = 12.0;
  std::vector<double> page_heights;  // of the form's pages, in points
};

// Vitals table from a dcd_flowsheet parse. Monotonicity/gap violations are
// appended to diagnostics; rows are still emitted.
std::vector<VitalsSeriesRow> build_vitals_table(const grammar::ParseResult& parse,
                                                std::vector<std::string>* diagnostics);

// Pre-op record: geometric checkbox binding (nearest anchor within 30 pt)
// plus the heparin inference — Dosage:/Time: evidence forces Yes.
PreOpRecord build_preop_record(const grammar::ParseResult& parse,
                               const grammar::FormGrammar& grammar,
                               const std::vector<detect::CheckboxObservation>& checkboxes,
                               const AnchorContext& ctx);

// Liver record: i-th checkbox in reading order binds the i-th declared
// checkbox field; exactly 8 observations required.
LiverDataRecord build_liver_record(const grammar::ParseResult& parse,
                                   const grammar::FormGrammar& grammar,
                                   const std::vector<detect::CheckboxObservation>& checkboxes);

constexpr double kAnchorMaxDistancePt = 30.0;

// Minutes since a fixed epoch for "YYYY-MM-DD HH:MM" prefixes; nullopt when
// the prefix is not a timestamp. Zone labels are ignored (carried verbatim
// elsewhere, never converted).
std::optional<long long> timestamp_minutes(const std::string& ts);

// -- Schemas ----------------------------------------------------------------

// The paper's vitals table: Minute,Time,HR,BP_Systolic,BP_Diastolic,MAP,RR,SaO2.
TableSchema vitals_schema();
TableSchema documents_schema();
TableSchema forms_schema();

// Scalar one-row table for a form or spliced subform: columns follow field
// declaration order. Checkbox columns are Integer 0/1 except when
// `checkbox_as_text` (the pre-op Yes/No/Missing convention).
TableSchema scalar_schema(const grammar::FormGrammar& grammar, const std::string& subform,
                          const std::string& table_name, bool checkbox_as_text);

// Row table for one repeat group.
TableSchema repeat_schema(const grammar::FormGrammar& grammar, const std::string& table);

Row vitals_row(const VitalsSeriesRow& r);
Row meta_row(const DocumentMeta& m);

}  // namespace formpipe::records
