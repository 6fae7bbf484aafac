#include "doctest.h"

#include "formpipe/grammar/registry.hpp"
#include "formpipe/records/records.hpp"
#include "support.hpp"

using namespace formpipe;

namespace {

grammar::FieldValue num(double v) {
  grammar::FieldValue f;
  f.type = grammar::FieldValue::Type::Number;
  f.number = v;
  f.integral = v == (long long)v;
  f.raw = std::to_string(v);
  return f;
}

grammar::FieldValue txt(const std::string& s) {
  grammar::FieldValue f;
  f.type = grammar::FieldValue::Type::Text;
  f.text = s;
  f.raw = s;
  return f;
}

grammar::RowBindings vitals_row_bindings(int minute, const std::string& ts, bool missing) {
  grammar::RowBindings b;
  b["minute"] = num(minute);
  b["time"] = txt(ts);
  if (missing) {
    for (const char* k : {"hr", "bp_systolic", "bp_diastolic", "map", "rr", "sao2"})
      b[k] = grammar::FieldValue::missing_value();
  } else {
    b["hr"] = num(100);
    b["bp_systolic"] = num(170);
    b["bp_diastolic"] = num(87);
    b["map"] = num(115);
    b["rr"] = num(12);
    b["sao2"] = num(88);
  }
  return b;
}

detect::CheckboxObservation obs_at(double px, double py, bool checked, int page = 0) {
  detect::CheckboxObservation o;
  o.state = checked ? detect::CheckState::Checked : detect::CheckState::Unchecked;
  o.page_x = px;
  o.page_y = py;
  o.page_index = page;
  return o;
}

const grammar::FormGrammar& preop_grammar() {
  return *testsupport::shipped_registry().find("pre_operative_management");
}

records::AnchorContext preop_ctx() {
  records::AnchorContext ctx;
  ctx.page_heights = {792.0};
  return ctx;
}

// Heparin anchor in the standalone grammar: row 4, col 10 -> (60, 744) pt.
constexpr double kHepX = 60, kHepY = 744;

}  // namespace

TEST_CASE("build_vitals_table keeps zeros and Missing distinct") {
  grammar::ParseResult parse;
  parse.form_id = "dcd_flowsheet";
  auto& rows = parse.tables["dcd_flowsheet"];
  rows.push_back(vitals_row_bindings(0, "2022-01-01 09:47 EST", false));
  auto zero = vitals_row_bindings(1, "2022-01-01 09:48 EST", false);
  for (const char* k : {"hr", "bp_systolic", "bp_diastolic", "map", "rr", "sao2"})
    zero[k] = num(0);
  rows.push_back(zero);
  rows.push_back(vitals_row_bindings(2, "2022-01-01 09:49 EST", true));

  std::vector<std::string> diags;
  auto out = records::build_vitals_table(parse, &diags);
  REQUIRE(out.size() == 3);
  CHECK(out[0].hr == 100);
  CHECK(out[1].hr == 0);           // true zero
  CHECK(!out[2].hr.has_value());   // Missing, not zero
  CHECK(diags.empty());
  CHECK(out[0].timestamp == "2022-01-01 09:47 EST");
}

TEST_CASE("vitals diagnostics: non-monotonic minutes and timestamp gaps") {
  grammar::ParseResult parse;
  auto& rows = parse.tables["dcd_flowsheet"];
  rows.push_back(vitals_row_bindings(0, "2022-01-01 09:47 EST", false));
  rows.push_back(vitals_row_bindings(2, "2022-01-01 09:49 EST", false));  // gap of 2
  std::vector<std::string> diags;
  auto out = records::build_vitals_table(parse, &diags);
  CHECK(out.size() == 2);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("TimestampGap") != std::string::npos);

  rows.clear();
  rows.push_back(vitals_row_bindings(5, "2022-01-01 09:47 EST", false));
  rows.push_back(vitals_row_bindings(5, "2022-01-01 09:48 EST", false));
  diags.clear();
  records::build_vitals_table(parse, &diags);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("NonMonotonicMinute") != std::string::npos);
}

TEST_CASE("timestamp arithmetic crosses hour and day boundaries") {
  auto a = records::timestamp_minutes("2022-01-01 23:59 EST");
  auto b = records::timestamp_minutes("2022-01-02 00:00 EST");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*b - *a == 1);
  CHECK(!records::timestamp_minutes("not a time").has_value());
}

TEST_CASE("heparin inference: dosage evidence forces Yes") {
  grammar::ParseResult parse;
  parse.form_id = "pre_operative_management";
  parse.bindings["heparin_dosage"] = num(30000);

  SUBCASE("dosage present, no checkbox") {
    auto rec = records::build_preop_record(parse, preop_grammar(), {}, preop_ctx());
    CHECK(rec.heparin == "Yes");
    CHECK(!rec.heparin_checkbox.has_value());
  }
  SUBCASE("checkbox unchecked but dosage present: inference wins with a warning") {
    auto rec = records::build_preop_record(parse, preop_grammar(),
                                           {obs_at(kHepX + 5, kHepY + 5, false)}, preop_ctx());
    CHECK(rec.heparin == "Yes");
    REQUIRE(rec.heparin_checkbox.has_value());
    CHECK(*rec.heparin_checkbox == false);
    bool warned = false;
    for (const auto& w : rec.warnings)
      if (w.find("ConflictingEvidence") != std::string::npos) warned = true;
    CHECK(warned);
  }
}

TEST_CASE("heparin from checkbox alone; Missing without any evidence") {
  grammar::ParseResult parse;
  parse.form_id = "pre_operative_management";

  auto rec = records::build_preop_record(parse, preop_grammar(),
                                         {obs_at(kHepX + 8, kHepY - 4, true)}, preop_ctx());
  CHECK(rec.heparin == "Yes");

  auto rec2 = records::build_preop_record(parse, preop_grammar(),
                                          {obs_at(kHepX + 8, kHepY - 4, false)}, preop_ctx());
  CHECK(rec2.heparin == "No");

  auto rec3 = records::build_preop_record(parse, preop_grammar(), {}, preop_ctx());
  CHECK(rec3.heparin == "");
}

TEST_CASE("heparin inference is monotone: evidence never downgrades Yes") {
  grammar::ParseResult with_all;
  with_all.form_id = "pre_operative_management";
  with_all.bindings["heparin_dosage"] = num(20000);
  with_all.bindings["heparin_time"] = txt("09:35");
  for (bool box_checked : {true, false}) {
    auto rec = records::build_preop_record(with_all, preop_grammar(),
                                           {obs_at(kHepX, kHepY, box_checked)}, preop_ctx());
    CHECK(rec.heparin == "Yes");
  }
}

TEST_CASE("checkbox observations beyond 30pt stay unassigned with a warning") {
  grammar::ParseResult parse;
  parse.form_id = "pre_operative_management";
  auto rec = records::build_preop_record(parse, preop_grammar(),
                                         {obs_at(kHepX + 200, kHepY - 100, true)}, preop_ctx());
  CHECK(!rec.heparin_checkbox.has_value());
  REQUIRE(rec.warnings.size() == 1);
  CHECK(rec.warnings[0].find("UnassignedCheckbox") != std::string::npos);
}

TEST_CASE("liver record binds ordered checkboxes positionally") {
  const auto& g = *testsupport::shipped_registry().find("liver_data");
  grammar::ParseResult parse;
  parse.form_id = "liver_data";
  std::vector<detect::CheckboxObservation> obs;
  bool pattern[8] = {true, false, true, false, false, false, true, false};
  for (int i = 0; i < 8; ++i) obs.push_back(obs_at(50 + i, 700 - i, pattern[i]));

  auto rec = records::build_liver_record(parse, g, obs);
  REQUIRE(rec.checkboxes.size() == 8);
  CHECK(rec.checkboxes[0].first == "biopsy_performed");
  CHECK(rec.checkboxes[7].first == "anatomy_normal");
  for (int i = 0; i < 8; ++i) CHECK(rec.checkboxes[i].second == pattern[i]);

  SUBCASE("all unchecked gives an all-false record") {
    for (auto& o : obs) o.state = detect::CheckState::Unchecked;
    auto rec2 = records::build_liver_record(parse, g, obs);
    for (const auto& [name, st] : rec2.checkboxes) CHECK(!st);
  }
  SUBCASE("seven observations raise CheckboxCountMismatch") {
    obs.pop_back();
    try {
      records::build_liver_record(parse, g, obs);
      FAIL("expected CheckboxCountMismatch");
    } catch (const records::RecordError& e) {
      CHECK(e.code() == records::RecordError::Code::CheckboxCountMismatch);
    }
  }
}

TEST_CASE("cells preserve integral numbers and Missing") {
  CHECK(records::Cell::from_field(num(30000)).type == records::Cell::Type::Int);
  CHECK(records::Cell::from_field(num(30000)).i == 30000);
  CHECK(records::Cell::from_field(num(0.25)).type == records::Cell::Type::Real);
  CHECK(records::Cell::from_field(grammar::FieldValue::missing_value()).is_null());
  CHECK(records::Cell::from_field(txt("09:35")).s == "09:35");
}

TEST_CASE("vitals schema matches the published column set") {
  auto s = records::vitals_schema();
  REQUIRE(s.columns.size() == 8);
  CHECK(s.columns[0].name == "Minute");
  CHECK(s.columns[1].name == "Time");
  CHECK(s.columns[2].name == "HR");
  CHECK(s.columns[3].name == "BP_Systolic");
  CHECK(s.columns[4].name == "BP_Diastolic");
  CHECK(s.columns[5].name == "MAP");
  CHECK(s.columns[6].name == "RR");
  CHECK(s.columns[7].name == "SaO2");
}

TEST_CASE("scalar schema routes fields by subform and checkbox style") {
  const auto& reg = testsupport::shipped_registry();
  const auto* dcd = reg.find("dcd_flowsheet");
  auto own = records::scalar_schema(*dcd, "", "dcd_flowsheet_info", true);
  REQUIRE(own.columns.size() == 3);
  CHECK(own.columns[0].name == "donor_id");

  auto preop = records::scalar_schema(*dcd, "pre_operative_management",
                                      "pre_operative_management", true);
  CHECK(preop.column_index("heparin") >= 0);
  CHECK(preop.columns[size_t(preop.column_index("heparin"))].affinity ==
        records::Affinity::Text);
  CHECK(preop.column_index("minute") < 0);  // repeat tokens are not scalars

  const auto* liver = reg.find("liver_data");
  auto ls = records::scalar_schema(*liver, "", "liver_data", false);
  CHECK(ls.column_index("biopsy_performed") >= 0);
  CHECK(ls.columns[size_t(ls.column_index("biopsy_performed"))].affinity ==
        records::Affinity::Integer);
}
