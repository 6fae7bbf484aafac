#include "formpipe/records/records.hpp"

#include <algorithm>

namespace formpipe::records {

namespace {

Affinity affinity_of(grammar::FieldKind kind, bool checkbox_as_text) {
  switch (kind) {
    case grammar::FieldKind::Number:
      return Affinity::Real;
    case grammar::FieldKind::CheckboxAnchor:
      return checkbox_as_text ? Affinity::Text : Affinity::Integer;
    default:
      return Affinity::Text;
  }
}

}  // namespace

TableSchema vitals_schema() {
  TableSchema s;
  s.table_name = "dcd_flowsheet";
  s.columns = {
      {"Minute", Affinity::Integer, false}, {"Time", Affinity::Text, false},
      {"HR", Affinity::Integer, true},      {"BP_Systolic", Affinity::Integer, true},
      {"BP_Diastolic", Affinity::Integer, true}, {"MAP", Affinity::Integer, true},
      {"RR", Affinity::Integer, true},      {"SaO2", Affinity::Integer, true},
  };
  s.primary_key = "Minute";
  return s;
}

TableSchema documents_schema() {
  TableSchema s;
  s.table_name = "documents";
  s.columns = {
      {"source_file", Affinity::Text, false},
      {"page_count", Affinity::Integer, false},
      {"generated_at", Affinity::Text, true},
      {"version_note", Affinity::Text, true},
  };
  s.primary_key = "source_file";
  return s;
}

TableSchema forms_schema() {
  TableSchema s;
  s.table_name = "forms";
  s.columns = {
      {"source_file", Affinity::Text, false}, {"form_id", Affinity::Text, false},
      {"first_page", Affinity::Integer, false}, {"pages", Affinity::Integer, false},
      {"parsed", Affinity::Integer, false},
  };
  return s;
}

TableSchema scalar_schema(const grammar::FormGrammar& grammar, const std::string& subform,
                          const std::string& table_name, bool checkbox_as_text) {
  // Tokens bound on this subform's (or the form's own) non-repeat lines.
  std::vector<std::string> scalar_tokens;
  for (const grammar::LinePattern& lp : grammar.lines) {
    if (lp.kind == grammar::LineKind::Repeat) continue;
    if (lp.subform != subform) continue;
    for (const std::string& t : lp.tokens) scalar_tokens.push_back(t);
  }

  TableSchema s;
  s.table_name = table_name;
  for (const grammar::FieldSpec& f : grammar.fields) {
    if (f.subform != subform) continue;
    bool is_anchor = f.kind == grammar::FieldKind::CheckboxAnchor;
    bool is_scalar =
        std::find(scalar_tokens.begin(), scalar_tokens.end(), f.name) != scalar_tokens.end();
    if (!is_anchor && !is_scalar) continue;
    s.columns.push_back({f.name, affinity_of(f.kind, checkbox_as_text), true});
  }
  return s;
}

TableSchema repeat_schema(const grammar::FormGrammar& grammar, const std::string& table) {
  TableSchema s;
  s.table_name = table;
  for (const grammar::LinePattern& lp : grammar.lines) {
    if (lp.kind != grammar::LineKind::Repeat || lp.table != table) continue;
    for (const std::string& t : lp.tokens) {
      const grammar::FieldSpec* f = grammar.field(t);
      s.columns.push_back({t, f ? affinity_of(f->kind, false) : Affinity::Text, true});
    }
    break;
  }
  return s;
}

namespace {
Cell opt_cell(const std::optional<int>& v) {
  return v ? Cell::integer(*v) : Cell::null();
}
}  // namespace

Row vitals_row(const VitalsSeriesRow& r) {
  return {Cell::integer(r.minute), Cell::text(r.timestamp), opt_cell(r.hr),
          opt_cell(r.bp_systolic), opt_cell(r.bp_diastolic), opt_cell(r.map),
          opt_cell(r.rr),          opt_cell(r.sao2)};
}

Row meta_row(const DocumentMeta& m) {
  return {Cell::text(m.source_file), Cell::integer(m.page_count),
          m.generated_at.empty() ? Cell::null() : Cell::text(m.generated_at),
          m.version_note.empty() ? Cell::null() : Cell::text(m.version_note)};
}

}  // namespace formpipe::records
