#include "formpipe/records/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace formpipe::records {

Cell Cell::from_field(const grammar::FieldValue& v) {
  using T = grammar::FieldValue::Type;
  switch (v.type) {
    case T::Missing:
      return Cell::null();
    case T::Number:
      if (v.integral && std::abs(v.number) < 9.0e15) return Cell::integer((long long)v.number);
      return Cell::real(v.number);
    case T::Text:
      return Cell::text(v.text);
  }
  return Cell::null();
}

int TableSchema::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return int(i);
  return -1;
}

namespace {

std::optional<int> opt_int(const grammar::RowBindings& row, const std::string& key) {
  auto it = row.find(key);
  if (it == row.end() || it->second.missing()) return std::nullopt;
  return int(it->second.number);
}

std::string text_of(const grammar::RowBindings& row, const std::string& key) {
  auto it = row.find(key);
  if (it == row.end() || it->second.missing()) return "";
  return it->second.text;
}

}  // namespace

std::optional<long long> timestamp_minutes(const std::string& ts) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  if (std::sscanf(ts.c_str(), "%4d-%2d-%2d %2d:%2d", &y, &mo, &d, &h, &mi) != 5)
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59) return std::nullopt;
  // Civil-date day number (Gregorian), good far beyond the data's range.
  int yy = y - (mo <= 2);
  long long era = (yy >= 0 ? yy : yy - 399) / 400;
  unsigned yoe = unsigned(yy - era * 400);
  unsigned doy = (153u * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  long long days = era * 146097 + (long long)doe - 719468;
  return days * 24 * 60 + h * 60 + mi;
}

std::vector<VitalsSeriesRow> build_vitals_table(const grammar::ParseResult& parse,
                                                std::vector<std::string>* diagnostics) {
  std::vector<VitalsSeriesRow> rows;
  auto it = parse.tables.find("dcd_flowsheet");
  if (it == parse.tables.end()) return rows;

  std::optional<int> prev_minute;
  std::optional<long long> prev_ts;
  for (const grammar::RowBindings& b : it->second) {
    VitalsSeriesRow r;
    r.minute = opt_int(b, "minute").value_or(0);
    r.timestamp = text_of(b, "time");
    r.hr = opt_int(b, "hr");
    r.bp_systolic = opt_int(b, "bp_systolic");
    r.bp_diastolic = opt_int(b, "bp_diastolic");
    r.map = opt_int(b, "map");
    r.rr = opt_int(b, "rr");
    r.sao2 = opt_int(b, "sao2");

    if (prev_minute && r.minute <= *prev_minute && diagnostics)
      diagnostics->push_back("NonMonotonicMinute: minute " + std::to_string(r.minute) +
                             " after " + std::to_string(*prev_minute));
    auto ts = timestamp_minutes(r.timestamp);
    if (prev_ts && ts && *ts - *prev_ts != 1 && diagnostics)
      diagnostics->push_back("TimestampGap: " + std::to_string(*ts - *prev_ts) +
                             " min before minute " + std::to_string(r.minute));
    prev_minute = r.minute;
    prev_ts = ts;
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

// Nearest-anchor assignment: each observation feeds at most one anchor.
std::map<std::string, const detect::CheckboxObservation*> assign_checkboxes(
    const grammar::FormGrammar& grammar, const std::vector<detect::CheckboxObservation>& obs,
    const AnchorContext& ctx, std::vector<std::string>* warnings) {
  std::map<std::string, const detect::CheckboxObservation*> out;
  std::vector<bool> used(obs.size(), false);

  for (const grammar::FieldSpec& f : grammar.fields) {
    if (f.kind != grammar::FieldKind::CheckboxAnchor) continue;
    double page_h = f.anchor_page < int(ctx.page_heights.size())
                        ? ctx.page_heights[f.anchor_page]
                        : 792.0;
    double ax = f.anchor_col * ctx.col_pitch;
    double ay = page_h - f.anchor_row * ctx.row_pitch;
    int best = -1;
    double best_d = kAnchorMaxDistancePt;
    for (size_t i = 0; i < obs.size(); ++i) {
      if (used[i] || obs[i].page_index != f.anchor_page) continue;
      double d = std::hypot(obs[i].page_x - ax, obs[i].page_y - ay);
      if (d <= best_d) {
        best_d = d;
        best = int(i);
      }
    }
    if (best >= 0) {
      used[best] = true;
      out[f.name] = &obs[best];
    }
  }
  for (size_t i = 0; i < obs.size(); ++i)
    if (!used[i] && warnings)
      warnings->push_back("UnassignedCheckbox: box at (" + std::to_string(int(obs[i].page_x)) +
                          "," + std::to_string(int(obs[i].page_y)) + ") pt on page " +
                          std::to_string(obs[i].page_index) + " matches no anchor");
  return out;
}

}  // namespace

PreOpRecord build_preop_record(const grammar::ParseResult& parse,
                               const grammar::FormGrammar& grammar,
                               const std::vector<detect::CheckboxObservation>& checkboxes,
                               const AnchorContext& ctx) {
  PreOpRecord rec;
  rec.fields = parse.bindings;

  auto assigned = assign_checkboxes(grammar, checkboxes, ctx, &rec.warnings);
  auto it = assigned.find("heparin");
  if (it != assigned.end())
    rec.heparin_checkbox = it->second->state == detect::CheckState::Checked;

  bool dosage_evidence = false;
  for (const char* key : {"heparin_dosage", "heparin_time"}) {
    auto f = rec.fields.find(key);
    if (f != rec.fields.end() && !f->second.missing()) dosage_evidence = true;
  }

  if (rec.heparin_checkbox.has_value())
    rec.heparin = *rec.heparin_checkbox ? "Yes" : "No";
  if (dosage_evidence) {
    if (rec.heparin == "No")
      rec.warnings.push_back(
          "ConflictingEvidence: heparin box unchecked but dosage/time present; inference wins");
    rec.heparin = "Yes";
  }
  return rec;
}

LiverDataRecord build_liver_record(const grammar::ParseResult& parse,
                                   const grammar::FormGrammar& grammar,
                                   const std::vector<detect::CheckboxObservation>& checkboxes) {
  LiverDataRecord rec;
  rec.fields = parse.bindings;

  std::vector<const grammar::FieldSpec*> anchors;
  for (const grammar::FieldSpec& f : grammar.fields)
    if (f.kind == grammar::FieldKind::CheckboxAnchor) anchors.push_back(&f);

  if (checkboxes.size() != anchors.size())
    throw RecordError(RecordError::Code::CheckboxCountMismatch,
                      "expected " + std::to_string(anchors.size()) + " checkboxes, detected " +
                          std::to_string(checkboxes.size()));
  for (size_t i = 0; i < anchors.size(); ++i)
    rec.checkboxes.emplace_back(anchors[i]->name,
                                checkboxes[i].state == detect::CheckState::Checked);
  return rec;
}

}  // namespace formpipe::records
