#include "formpipe/synth/forms.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "formpipe/synth/pdfwriter.hpp"

namespace formpipe::synth {

using exporters::ojson;

std::vector<std::string> PageSpec::lines() const {
  int max_row = -1, max_col = 0;
  for (const Frag& f : frags) {
    max_row = std::max(max_row, f.row);
    max_col = std::max(max_col, f.col + int(f.text.size()));
  }
  std::vector<std::string> out(size_t(max_row + 1));
  std::vector<std::string> grid(size_t(max_row + 1), std::string(size_t(max_col), ' '));
  for (const Frag& f : frags)
    for (size_t i = 0; i < f.text.size(); ++i) grid[f.row][f.col + i] = f.text[i];
  for (size_t r = 0; r < grid.size(); ++r) {
    size_t end = grid[r].find_last_not_of(' ');
    out[r] = end == std::string::npos ? "" : grid[r].substr(0, end + 1);
  }
  return out;
}

namespace {

double col_x(int col) { return col * kColPitch; }
double row_y(int row) { return kPageH - row * kRowPitch; }

void draw_checkbox(ContentBuilder& cb, int row, int col, bool checked, int style) {
  double x = col_x(col);
  double y = row_y(row) - 4.0;  // lower-left; box rises past the baseline
  cb.rect_stroke(x, y, kBoxSidePt, kBoxSidePt, 0.0, 1.0);
  if (!checked) return;
  if (style == 0) {
    cb.rect_fill(x, y, kBoxSidePt, kBoxSidePt, 0.0);
  } else {
    cb.line(x, y, x + kBoxSidePt, y + kBoxSidePt, 0.0, 3.0);
    cb.line(x, y + kBoxSidePt, x + kBoxSidePt, y, 0.0, 3.0);
  }
}

}  // namespace

std::string PageSpec::content() const {
  ContentBuilder cb;
  for (const Rule& r : rules) cb.line(r.x0, r.y0, r.x1, r.y1, 0.5, r.width);
  for (const Decor& d : decor) cb.rect_fill(d.x, d.y, d.w, d.h, 0.0);
  for (const Box& b : boxes) draw_checkbox(cb, b.row, b.col, b.checked, b.style);
  for (const Frag& f : frags) cb.text(col_x(f.col), row_y(f.row), f.text, 10.0);
  return cb.ops();
}

namespace {

// -- shared pools -------------------------------------------------------------

const std::vector<std::string> kNames = {
    "James Carter", "Maria Lopez",  "Sarah O'Neil", "David Kim",   "Nina Patel",
    "Robert Hayes", "Laura Chen",   "Omar Haddad",  "Grace Miller", "Peter Novak"};
const std::vector<std::string> kHospitals = {
    "St. Mary Medical Center", "Riverside General Hospital", "Lakeview Regional",
    "Mercy West", "University Hospital"};
const std::vector<std::string> kAgents = {"Morphine", "Fentanyl", "Midazolam", "Lorazepam"};
const std::vector<std::string> kMeds = {"Heparin",        "Vecuronium", "Fentanyl",
                                        "Norepinephrine", "Vasopressin", "Midazolam"};
const std::vector<std::string> kMedUnits = {"mg", "mcg", "units"};
const std::vector<std::string> kRoutes = {"IV", "IM", "PO", "SL"};
const std::vector<std::string> kFluids = {"Normal Saline", "LR", "D5W", "Albumin 5%",
                                          "Plasmalyte"};
const std::vector<std::string> kSources = {"Urine", "Gastric", "Chest Tube", "Drain"};
const std::vector<std::string> kZones = {"EST", "CST", "MST", "PST"};
const std::vector<std::string> kYesVariants = {"Yes", "YES", "Y", "yes"};
const std::vector<std::string> kNoVariants = {"No", "NO", "N", "no"};
const std::vector<std::string> kAppearance = {"Normal", "Pale", "Congested", "Fatty"};
const std::vector<std::string> kPerfusate = {"KPS-1", "UW", "HTK"};
const std::vector<std::string> kVentModes = {"AC", "SIMV", "PS", "PRVC"};
const std::vector<std::string> kOrgans = {"Kidneys", "Liver", "Both", "None"};
const std::vector<std::string> kUnitsWard = {"ICU", "ED", "CCU", "MICU", "SICU"};
const std::vector<std::string> kCauses = {"Anoxia", "Head Trauma", "CVA", "Drug Intoxication"};
const std::vector<std::string> kComments = {
    "Family at bedside throughout the withdrawal period.",
    "Donor remained hemodynamically stable until extubation.",
    "OPO notified of arrest time by attending staff.",
    "No complications noted during the observation window.",
    "Chaplain present at family request.",
    "Respiratory therapy completed terminal wean per protocol."};

// -- small formatting helpers -------------------------------------------------

std::string two(int v) {
  char b[8];
  std::snprintf(b, sizeof(b), "%02d", v);
  return b;
}

struct Clock {
  int minutes = 0;  // since midnight
  std::string hhmm() const { return two(minutes / 60) + ":" + two(minutes % 60); }
};

std::string iso_date(int m, int d) { return "2022-" + two(m) + "-" + two(d); }

// Printed variant of a canonical HH:MM time.
std::string time_variant(const std::string& canonical, Rng& rng) {
  if (rng.chance(0.5)) return canonical;
  return canonical.substr(0, 2) + canonical.substr(3);  // "0935"
}

std::string date_variant(const std::string& iso, Rng& rng) {
  if (rng.chance(0.7)) return iso;
  int y = atoi(iso.substr(0, 4).c_str());
  int m = atoi(iso.substr(5, 2).c_str());
  int d = atoi(iso.substr(8, 2).c_str());
  return std::to_string(m) + "/" + std::to_string(d) + "/" + std::to_string(y);
}

std::string yesno_variant(bool yes, Rng& rng) {
  return rng.pick(yes ? kYesVariants : kNoVariants);
}

std::string donor_id(Rng& rng) {
  char b[16];
  std::snprintf(b, sizeof(b), "D%06d", rng.range(1, 999999));
  return b;
}

std::string fmt1(double v) {
  char b[32];
  std::snprintf(b, sizeof(b), "%.1f", v);
  return b;
}

std::string fmt2(double v) {
  char b[32];
  std::snprintf(b, sizeof(b), "%.2f", v);
  return b;
}

// -- layout writer ------------------------------------------------------------

class Sheet {
public:
  Sheet(int value_shift, bool extra_blanks, Rng& perturb)
      : shift_(value_shift), extra_blanks_(extra_blanks), perturb_(perturb) {}

  PageSpec page;
  int row = 0;

  void label(int col, const std::string& s) { page.frags.push_back({row, col, s, false}); }
  void value(int col, const std::string& s) {
    if (s.empty()) return;
    page.frags.push_back({row, std::max(col + shift_, 0), s, true});
  }
  void box(int col, bool checked, int style) { page.boxes.push_back({row, col, checked, style}); }
  void nl(int n = 1) { row += n; }

  // At most two extra blank rows per page, so checkbox anchors stay within
  // the 30 pt binding radius.
  void gap_slot() {
    if (extra_blanks_ && budget_ > 0 && perturb_.chance(0.6)) {
      ++row;
      --budget_;
    }
  }

  void hrule(double y, double x0 = 18, double x1 = 594) {
    page.rules.push_back({x0, y, x1, y, 0.8});
  }
  void rule_under_current_row() { hrule(row_y(row) - 3.0); }

  void page_border() {
    page.rules.push_back({20, 30, 592, 30, 0.8});
    page.rules.push_back({20, 762, 592, 762, 0.8});
    page.rules.push_back({20, 30, 20, 762, 0.8});
    page.rules.push_back({592, 30, 592, 762, 0.8});
  }

  void corner_decor() { page.decor.push_back({560, 752, 8, 8}); }

private:
  int shift_;
  bool extra_blanks_;
  Rng& perturb_;
  int budget_ = 2;
};

// -- pre-operative management section ------------------------------------------
// Shared between the standalone form and page 1 of the DCD flowsheet. The
// grammar mirrors these rows; the heparin checkbox anchor is (section row + 4,
// col 10).

struct PreOpValues {
  std::string withdrawal_date_iso, withdrawal_time, extubated;  // canonical
  std::string extubation_time, heparin_dosage_unit, heparin_time;
  long long heparin_dosage = -1;  // -1 = absent
  std::string comfort_care, comfort_care_agent;
  int morphine_dose_mg = -1;
  std::string opo_coordinator, attending_physician, pronounced_by;
  std::string pronouncement_time, circulatory_arrest_time, incision_time;
  int urine_output_ml = 0, crystalloid_volume_ml = 0;
  std::string flush_time, organs_flushed;
  // checkbox scenario
  bool box_present = true;
  bool box_checked = false;
  bool stray_box = false;
  std::string heparin_derived;  // "Yes", "No" or "" (missing)
};

PreOpValues roll_preop(Rng& rng) {
  PreOpValues v;
  v.withdrawal_date_iso = iso_date(rng.range(1, 12), rng.range(1, 28));
  Clock t{rng.range(6 * 60, 18 * 60)};
  v.withdrawal_time = t.hhmm();
  bool extubated = rng.chance(0.85);
  v.extubated = extubated ? "Yes" : "No";
  if (extubated) v.extubation_time = Clock{t.minutes + rng.range(1, 9)}.hhmm();

  int scenario = rng.range(0, 99);
  bool dosage = false;
  if (scenario < 40) {  // checked + dosage
    v.box_present = true;
    v.box_checked = true;
    dosage = true;
    v.heparin_derived = "Yes";
  } else if (scenario < 50) {  // checked, no dosage
    v.box_present = true;
    v.box_checked = true;
    v.heparin_derived = "Yes";
  } else if (scenario < 65) {  // unchecked but dosage present: inference wins
    v.box_present = true;
    v.box_checked = false;
    dosage = true;
    v.heparin_derived = "Yes";
  } else if (scenario < 85) {  // unchecked, no dosage
    v.box_present = true;
    v.box_checked = false;
    v.heparin_derived = "No";
  } else {  // no box drawn at all, no evidence
    v.box_present = false;
    v.heparin_derived = "";
  }
  if (dosage) {
    v.heparin_dosage = 1000LL * rng.range(10, 40);
    v.heparin_dosage_unit = rng.chance(0.7) ? "units" : "IU";
    v.heparin_time = Clock{t.minutes + rng.range(2, 14)}.hhmm();
  }
  v.stray_box = rng.chance(0.08);

  bool comfort = rng.chance(0.7);
  v.comfort_care = comfort ? "Yes" : "No";
  if (comfort && rng.chance(0.9)) v.comfort_care_agent = rng.pick(kAgents);
  if (rng.chance(0.6)) v.morphine_dose_mg = rng.range(2, 10);
  v.opo_coordinator = rng.pick(kNames);
  v.attending_physician = rng.pick(kNames);
  v.pronounced_by = rng.pick(kNames);
  int arrest = t.minutes + rng.range(10, 55);
  v.circulatory_arrest_time = Clock{arrest}.hhmm();
  v.pronouncement_time = Clock{arrest + rng.range(2, 6)}.hhmm();
  v.incision_time = Clock{arrest + rng.range(6, 15)}.hhmm();
  v.urine_output_ml = rng.range(50, 900);
  v.crystalloid_volume_ml = rng.range(250, 3000);
  v.flush_time = Clock{arrest + rng.range(8, 20)}.hhmm();
  v.organs_flushed = rng.pick(kOrgans);
  return v;
}

void emit_preop_section(Sheet& s, const PreOpValues& v, Rng& rng, const Perturbations& p) {
  s.label(18, "PRE-OPERATIVE MANAGEMENT");
  s.nl(2);
  s.gap_slot();
  s.label(0, "Withdrawal Date:");
  s.value(20, date_variant(v.withdrawal_date_iso, rng));
  s.label(40, "Withdrawal Time:");
  s.value(60, time_variant(v.withdrawal_time, rng));
  s.nl();
  s.label(0, "Extubated:");
  s.value(20, yesno_variant(v.extubated == "Yes", rng));
  s.label(40, "Extubation Time:");
  if (!v.extubation_time.empty()) s.value(60, time_variant(v.extubation_time, rng));
  s.nl();
  s.label(0, "Heparin:");
  if (v.box_present) s.box(10, v.box_checked, rng.range(0, 1));
  s.label(30, p.alt_labels ? "Dose:" : "Dosage:");
  if (v.heparin_dosage >= 0) {
    std::string printed = std::to_string(v.heparin_dosage);
    if (rng.chance(0.3) && printed.size() > 3)  // thousands separator variant
      printed.insert(printed.size() - 3, ",");
    s.value(40, printed + " " + v.heparin_dosage_unit);
  }
  s.label(60, "Time:");
  if (!v.heparin_time.empty()) s.value(68, time_variant(v.heparin_time, rng));
  s.nl(2);  // box descender row stays blank
  s.gap_slot();
  s.label(0, "Comfort Care:");
  s.value(20, yesno_variant(v.comfort_care == "Yes", rng));
  s.label(40, "Agent:");
  if (!v.comfort_care_agent.empty()) s.value(52, v.comfort_care_agent);
  s.nl();
  s.label(0, "Morphine Dose:");
  if (v.morphine_dose_mg >= 0) s.value(20, std::to_string(v.morphine_dose_mg) + " mg");
  s.nl();
  s.label(0, "OPO Coordinator:");
  s.value(20, v.opo_coordinator);
  s.label(45, "Physician:");
  s.value(58, v.attending_physician);
  s.nl();
  s.label(0, "Pronounced By:");
  s.value(20, v.pronounced_by);
  s.label(45, "Pronouncement Time:");
  s.value(67, time_variant(v.pronouncement_time, rng));
  s.nl();
  s.label(0, "Circulatory Arrest Time:");
  s.value(27, time_variant(v.circulatory_arrest_time, rng));
  s.label(45, "Incision Time:");
  s.value(62, time_variant(v.incision_time, rng));
  s.nl();
  s.label(0, "Urine Output:");
  s.value(20, std::to_string(v.urine_output_ml) + " mL");
  s.label(45, "Crystalloid Volume:");
  s.value(67, std::to_string(v.crystalloid_volume_ml) + " mL");
  s.nl();
  s.label(0, "Flush Time:");
  s.value(20, time_variant(v.flush_time, rng));
  s.label(45, "Organs Flushed:");
  s.value(63, v.organs_flushed);
  if (v.stray_box) {
    s.nl(4);
    s.box(60, false, 0);
    s.nl(-4);
  }
}

ojson preop_fields_truth(const PreOpValues& v) {
  ojson f = ojson::object();
  f["withdrawal_date"] = v.withdrawal_date_iso;
  f["withdrawal_time"] = v.withdrawal_time;
  f["extubated"] = v.extubated;
  f["extubation_time"] = v.extubation_time.empty() ? ojson(nullptr) : ojson(v.extubation_time);
  f["heparin"] = v.heparin_derived.empty() ? ojson(nullptr) : ojson(v.heparin_derived);
  f["heparin_dosage"] = v.heparin_dosage < 0 ? ojson(nullptr) : ojson(v.heparin_dosage);
  f["heparin_dosage_unit"] =
      v.heparin_dosage < 0 ? ojson(nullptr) : ojson(v.heparin_dosage_unit);
  f["heparin_time"] = v.heparin_time.empty() ? ojson(nullptr) : ojson(v.heparin_time);
  f["comfort_care"] = v.comfort_care;
  f["comfort_care_agent"] =
      v.comfort_care_agent.empty() ? ojson(nullptr) : ojson(v.comfort_care_agent);
  f["morphine_dose_mg"] = v.morphine_dose_mg < 0 ? ojson(nullptr) : ojson(v.morphine_dose_mg);
  f["opo_coordinator"] = v.opo_coordinator;
  f["attending_physician"] = v.attending_physician;
  f["pronounced_by"] = v.pronounced_by;
  f["pronouncement_time"] = v.pronouncement_time;
  f["circulatory_arrest_time"] = v.circulatory_arrest_time;
  f["incision_time"] = v.incision_time;
  f["urine_output_ml"] = v.urine_output_ml;
  f["crystalloid_volume_ml"] = v.crystalloid_volume_ml;
  f["flush_time"] = v.flush_time;
  f["organs_flushed"] = v.organs_flushed;
  return f;
}

ojson preop_checkbox_truth(const PreOpValues& v) {
  ojson c = ojson::object();
  c["heparin"] = v.box_present ? ojson(v.box_checked) : ojson(nullptr);
  return c;
}

// -- vitals table ---------------------------------------------------------------

struct VitalsRow {
  int minute;
  std::string timestamp;
  bool missing = false;
  int hr = 0, bps = 0, bpd = 0, map = 0, rr = 0, sao2 = 0;
};

std::vector<VitalsRow> roll_vitals(Rng& rng, const std::string& date_iso,
                                   const std::string& zone) {
  std::vector<VitalsRow> rows;
  if (rng.chance(0.05)) return rows;  // header-only table
  int n = rng.range(6, 21);
  int arrest = rng.range(3, n - 2);
  int nan_from = rng.range(arrest + 1, n);
  int start = rng.range(6 * 60, 20 * 60);
  for (int i = 0; i < n; ++i) {
    VitalsRow r;
    r.minute = i;
    r.timestamp = date_iso + " " + Clock{start + i}.hhmm() + " " + zone;
    if (i >= nan_from) {
      r.missing = true;
    } else if (i >= arrest) {
      r.hr = r.bps = r.bpd = r.map = r.rr = r.sao2 = 0;
    } else {
      r.hr = rng.range(40, 160);
      r.bps = rng.range(60, 210);
      r.bpd = rng.range(30, 110);
      r.map = r.bpd + (r.bps - r.bpd) / 3;
      r.rr = rng.range(0, 35);
      r.sao2 = rng.range(0, 100);
    }
    rows.push_back(r);
  }
  return rows;
}

void emit_vitals_page(Sheet& s, const std::vector<VitalsRow>& rows) {
  s.label(0, "Minute");
  s.label(9, "Time");
  s.label(33, "HR");
  s.label(39, "BP_Systolic");
  s.label(53, "BP_Diastolic");
  s.label(68, "MAP");
  s.label(74, "RR");
  s.label(79, "SaO2");
  s.rule_under_current_row();
  s.nl();
  s.gap_slot();
  for (const VitalsRow& r : rows) {
    s.value(0, std::to_string(r.minute));
    s.value(9, r.timestamp);
    if (!r.missing) {
      s.value(33, std::to_string(r.hr));
      s.value(39, std::to_string(r.bps));
      s.value(53, std::to_string(r.bpd));
      s.value(68, std::to_string(r.map));
      s.value(74, std::to_string(r.rr));
      s.value(79, std::to_string(r.sao2));
    }
    s.nl();
  }
}

ojson vitals_truth(const std::vector<VitalsRow>& rows) {
  ojson t = ojson::array();
  for (const VitalsRow& r : rows) {
    ojson row = ojson::object();
    row["minute"] = r.minute;
    row["time"] = r.timestamp;
    if (r.missing) {
      for (const char* k : {"hr", "bp_systolic", "bp_diastolic", "map", "rr", "sao2"})
        row[k] = nullptr;
    } else {
      row["hr"] = r.hr;
      row["bp_systolic"] = r.bps;
      row["bp_diastolic"] = r.bpd;
      row["map"] = r.map;
      row["rr"] = r.rr;
      row["sao2"] = r.sao2;
    }
    t.push_back(std::move(row));
  }
  return t;
}

// -- individual forms -----------------------------------------------------------

FormInstance make_dcd_flowsheet(Rng& rng, Rng& prng, const Perturbations& p) {
  FormInstance fi;
  fi.form_id = "dcd_flowsheet";
  int shift = p.shifted_columns ? (prng.chance(0.5) ? 2 : -2) : 0;

  PreOpValues pre = roll_preop(rng);
  std::string id = donor_id(rng);
  std::string version = std::to_string(rng.range(1, 3)) + "." + std::to_string(rng.range(0, 9));
  std::string zone = rng.pick(kZones);
  std::string gen_ts =
      pre.withdrawal_date_iso + " " + Clock{rng.range(8 * 60, 23 * 60)}.hhmm() + " " + zone;
  std::vector<VitalsRow> vit = roll_vitals(rng, pre.withdrawal_date_iso, zone);

  Sheet s1(shift, p.extra_blank_lines, prng);
  s1.label(20, "DCD FLOWSHEET");
  s1.nl(2);
  s1.label(0, "Donor ID:");
  s1.value(12, id);
  s1.label(30, "Version:");
  s1.value(41, version);
  s1.nl();
  s1.label(0, "Generated:");
  s1.value(13, gen_ts);
  s1.nl(2);
  emit_preop_section(s1, pre, rng, p);
  if (p.gray_rules) s1.page_border();
  s1.corner_decor();

  Sheet s2(shift, p.extra_blank_lines, prng);
  emit_vitals_page(s2, vit);
  if (p.gray_rules) s2.page_border();

  fi.pages = {s1.page, s2.page};
  fi.truth["form_id"] = fi.form_id;
  ojson fields = ojson::object();
  fields["donor_id"] = id;
  fields["version_note"] = version;
  fields["generated_at"] = gen_ts;
  ojson pre_truth = preop_fields_truth(pre);
  for (auto& [k, v] : pre_truth.items()) fields[k] = v;
  fi.truth["fields"] = fields;
  fi.truth["checkboxes"] = preop_checkbox_truth(pre);
  fi.truth["tables"]["dcd_flowsheet"] = vitals_truth(vit);
  return fi;
}

FormInstance make_preop(Rng& rng, Rng& prng, const Perturbations& p) {
  FormInstance fi;
  fi.form_id = "pre_operative_management";
  int shift = p.shifted_columns ? (prng.chance(0.5) ? 2 : -2) : 0;
  PreOpValues pre = roll_preop(rng);
  Sheet s(shift, p.extra_blank_lines, prng);
  emit_preop_section(s, pre, rng, p);
  if (p.gray_rules) s.page_border();
  s.corner_decor();
  fi.pages = {s.page};
  fi.truth["form_id"] = fi.form_id;
  fi.truth["fields"] = preop_fields_truth(pre);
  fi.truth["checkboxes"] = preop_checkbox_truth(pre);
  fi.truth["tables"] = ojson::object();
  return fi;
}

FormInstance make_liver_data(Rng& rng, Rng& prng, const Perturbations& p) {
  FormInstance fi;
  fi.form_id = "liver_data";
  int shift = p.shifted_columns ? (prng.chance(0.5) ? 2 : -2) : 0;

  std::string id = donor_id(rng);
  std::string date = iso_date(rng.range(1, 12), rng.range(1, 28));
  std::string surgeon = rng.pick(kNames);
  double weight = rng.range(8000, 22000) / 10.0;
  std::string appearance = rng.pick(kAppearance);
  bool states[8];
  for (bool& b : states) b = rng.chance(0.5);

  Sheet s(shift, p.extra_blank_lines, prng);
  s.label(25, "LIVER DATA");
  s.nl(2);
  s.label(0, "Donor ID:");
  s.value(12, id);
  s.label(30, "Date:");
  s.value(38, date_variant(date, rng));
  s.nl();
  s.label(0, "Surgeon:");
  s.value(12, surgeon);
  s.nl(2);
  s.gap_slot();
  s.label(0, "Liver Weight:");
  s.value(16, fmt1(weight) + " g");
  s.label(34, "Appearance:");
  s.value(48, appearance);
  s.nl(2);

  static const char* kBoxLabels[8] = {"Biopsy Performed", "Steatosis Present",
                                      "Fibrosis Present", "Capsule Intact",
                                      "Edges Sharp",      "Texture Normal",
                                      "Flush Adequate",   "Anatomy Normal"};
  // Four label rows; the drawn boxes sit two rows under their labels.
  for (int pair = 0; pair < 4; ++pair) {
    s.label(3, kBoxLabels[pair * 2]);
    s.label(33, kBoxLabels[pair * 2 + 1]);
    s.nl(2);
    s.box(3, states[pair * 2], rng.range(0, 1));
    s.box(33, states[pair * 2 + 1], rng.range(0, 1));
    s.nl(2);
  }
  // Frame around the checkbox block (gray, suppressed by binarization).
  s.hrule(row_y(7) + 6);
  s.hrule(row_y(s.row) + 6);
  if (p.gray_rules) s.page_border();
  s.corner_decor();

  fi.pages = {s.page};
  fi.truth["form_id"] = fi.form_id;
  ojson fields = ojson::object();
  fields["ld_donor_id"] = id;
  fields["ld_date"] = date;
  fields["ld_surgeon"] = surgeon;
  fields["liver_weight_g"] = weight;
  fields["liver_appearance"] = appearance;
  fi.truth["fields"] = fields;
  static const char* kBoxTokens[8] = {"biopsy_performed", "steatosis_present",
                                      "fibrosis_present", "capsule_intact",
                                      "edges_sharp",      "texture_normal",
                                      "flush_adequate",   "anatomy_normal"};
  ojson boxes = ojson::object();
  for (int i = 0; i < 8; ++i) boxes[kBoxTokens[i]] = states[i];
  fi.truth["checkboxes"] = boxes;
  fi.truth["tables"] = ojson::object();
  return fi;
}

FormInstance make_kidney_perfusion(Rng& rng, Rng& prng, const Perturbations& p) {
  FormInstance fi;
  fi.form_id = "kidney_perfusion_flow_sheet";
  int shift = p.shifted_columns ? (prng.chance(0.5) ? 2 : -2) : 0;

  std::string id = donor_id(rng);
  std::string side = rng.chance(0.5) ? "Left" : "Right";
  char pump[16];
  std::snprintf(pump, sizeof(pump), "%c%c-%03d", 'A' + rng.range(0, 25), 'A' + rng.range(0, 25),
                rng.range(1, 999));
  std::string perfusate = rng.pick(kPerfusate);
  int start = rng.range(5 * 60, 22 * 60);
  int n = rng.range(3, 8);

  Sheet s(shift, p.extra_blank_lines, prng);
  s.label(12, "KIDNEY PERFUSION FLOW SHEET");
  s.nl(2);
  s.label(0, "Donor ID:");
  s.value(12, id);
  s.label(24, "Kidney:");
  s.value(34, rng.chance(0.3) ? side.substr(0, 1) : side);
  s.label(44, "Pump ID:");
  s.value(55, pump);
  s.nl();
  s.label(0, "Perfusate:");
  s.value(13, perfusate);
  s.label(24, "Start Time:");
  s.value(38, time_variant(Clock{start}.hhmm(), rng));
  s.nl(2);
  s.gap_slot();
  s.label(0, "Time");
  s.label(9, "Flow mL/min");
  s.label(24, "Pressure mmHg");
  s.label(41, "Resistance");
  s.rule_under_current_row();
  s.nl();

  ojson rows = ojson::array();
  for (int i = 0; i < n; ++i) {
    int flow = rng.range(40, 180);
    int pressure = rng.range(20, 60);
    double resistance = rng.range(10, 60) / 100.0;
    std::string tm = Clock{start + i * 10}.hhmm();
    s.value(0, tm);
    s.value(9, std::to_string(flow));
    s.value(24, std::to_string(pressure));
    s.value(41, fmt2(resistance));
    s.nl();
    ojson row = ojson::object();
    row["kp_time"] = tm;
    row["kp_flow"] = flow;
    row["kp_pressure"] = pressure;
    row["kp_resistance"] = resistance;
    rows.push_back(std::move(row));
  }
  if (p.gray_rules) s.page_border();
  s.corner_decor();

  fi.pages = {s.page};
  fi.truth["form_id"] = fi.form_id;
  ojson fields = ojson::object();
  fields["kp_donor_id"] = id;
  fields["kidney_side"] = side;
  fields["pump_id"] = pump;
  fields["perfusate"] = perfusate;
  fields["kp_start_time"] = Clock{start}.hhmm();
  fi.truth["fields"] = fields;
  fi.truth["checkboxes"] = ojson::object();
  fi.truth["tables"]["kidney_perfusion"] = rows;
  return fi;
}

FormInstance make_referral(Rng& rng, Rng& prng, const Perturbations& p) {
  FormInstance fi;
  fi.form_id = "referral_worksheet";
  int shift = p.shifted_columns ? (prng.chance(0.5) ? 2 : -2) : 0;

  std::string date = iso_date(rng.range(1, 12), rng.range(1, 28));
  std::string time = Clock{rng.range(0, 23 * 60)}.hhmm();
  std::string hospital = rng.pick(kHospitals);
  std::string ward = rng.pick(kUnitsWard);
  std::string contact = rng.pick(kNames) + (rng.chance(0.4) ? ", RN" : "");
  int age = rng.range(12, 78);
  bool male = rng.chance(0.5);
  std::string blood = rng.pick(std::vector<std::string>{"A", "B", "AB", "O"}) +
                      (rng.chance(0.7) ? (rng.chance(0.5) ? "+" : "-") : "");
  std::string cause = rng.pick(kCauses);
  int n_comments = rng.range(1, 3);

  Sheet s(shift, p.extra_blank_lines, prng);
  s.label(16, "REFERRAL WORKSHEET");
  s.nl(2);
  s.label(0, "Referral Date:");
  s.value(17, date_variant(date, rng));
  s.label(34, "Referral Time:");
  s.value(51, time_variant(time, rng));
  s.nl();
  s.label(0, "Referring Hospital:");
  s.value(22, hospital);
  s.nl();
  s.label(0, "Unit:");
  s.value(8, ward);
  s.label(20, "Contact:");
  s.value(31, contact);
  s.nl();
  s.label(0, "Age:");
  s.value(8, std::to_string(age));
  s.label(14, "Sex:");
  s.value(21, male ? (rng.chance(0.5) ? "M" : "Male") : (rng.chance(0.5) ? "F" : "Female"));
  s.label(30, "Blood Type:");
  s.value(44, blood);
  s.nl();
  s.label(0, "Cause of Death:");
  s.value(18, cause);
  s.nl(2);
  s.gap_slot();
  s.label(0, "Comments:");
  s.nl();
  ojson rows = ojson::array();
  for (int i = 0; i < n_comments; ++i) {
    std::string c = rng.pick(kComments);
    s.value(2, c);
    s.nl();
    ojson row = ojson::object();
    row["ref_comment_line"] = c;
    rows.push_back(std::move(row));
  }
  if (p.gray_rules) s.page_border();
  s.corner_decor();

  fi.pages = {s.page};
  fi.truth["form_id"] = fi.form_id;
  ojson fields = ojson::object();
  fields["ref_date"] = date;
  fields["ref_time"] = time;
  fields["ref_hospital"] = hospital;
  fields["ref_unit"] = ward;
  fields["ref_contact"] = contact;
  fields["ref_age"] = age;
  fields["ref_sex"] = male ? "M" : "F";
  fields["ref_blood_type"] = blood;
  fields["ref_cause_of_death"] = cause;
  fi.truth["fields"] = fields;
  fi.truth["checkboxes"] = ojson::object();
  fi.truth["tables"]["referral_comments"] = rows;
  return fi;
}

FormInstance make_flowsheet(Rng& rng, Rng& prng, const Perturbations& p) {
  FormInstance fi;
  fi.form_id = "flowsheet";
  int shift = p.shifted_columns ? (prng.chance(0.5) ? 2 : -2) : 0;

  std::string id = donor_id(rng);
  std::string date = iso_date(rng.range(1, 12), rng.range(1, 28));
  int t0 = rng.range(6 * 60, 14 * 60);

  Sheet s(shift, p.extra_blank_lines, prng);
  s.label(25, "FLOWSHEET");
  s.nl(2);
  s.label(0, "Donor ID:");
  s.value(12, id);
  s.label(30, "Date:");
  s.value(38, date_variant(date, rng));
  s.nl(2);

  ojson vs_rows = ojson::array();
  s.label(0, "VITAL SIGNS");
  s.rule_under_current_row();
  s.nl();
  s.label(0, "Time");
  s.label(9, "HR");
  s.label(15, "BP");
  s.label(25, "RR");
  s.label(31, "SpO2");
  s.label(38, "Temp");
  s.nl();
  int n_vs = rng.range(3, 6);
  for (int i = 0; i < n_vs; ++i) {
    std::string tm = Clock{t0 + i * 60}.hhmm();
    int hr = rng.range(50, 130), bps = rng.range(85, 180), bpd = rng.range(40, 100);
    int rr = rng.range(8, 28), spo2 = rng.range(85, 100);
    double temp = rng.range(356, 389) / 10.0;
    s.value(0, tm);
    s.value(9, std::to_string(hr));
    s.value(15, std::to_string(bps) + "/" + std::to_string(bpd));
    s.value(25, std::to_string(rr));
    s.value(31, std::to_string(spo2));
    s.value(38, fmt1(temp));
    s.nl();
    ojson row = ojson::object();
    row["vs_time"] = tm;
    row["vs_hr"] = hr;
    row["vs_bp_systolic"] = bps;
    row["vs_bp_diastolic"] = bpd;
    row["vs_rr"] = rr;
    row["vs_spo2"] = spo2;
    row["vs_temp_c"] = temp;
    row["vs_timestamp"] = date + " " + tm;  // bare times inherit the form date
    vs_rows.push_back(std::move(row));
  }
  s.nl();
  s.gap_slot();

  s.label(0, "VENT SETTINGS");
  s.rule_under_current_row();
  s.nl();
  std::string mode = rng.pick(kVentModes);
  int rate = rng.range(10, 24), fio2 = rng.range(30, 100), peep = rng.range(4, 12);
  int tv = rng.range(350, 600);
  s.label(0, "Mode:");
  s.value(8, mode);
  s.label(20, "Rate:");
  s.value(28, std::to_string(rate));
  s.label(36, "FiO2:");
  s.value(44, std::to_string(fio2) + " %");
  s.nl();
  s.label(0, "PEEP:");
  s.value(8, std::to_string(peep));
  s.label(20, "Tidal Volume:");
  s.value(36, std::to_string(tv) + " mL");
  s.nl(2);
  s.gap_slot();

  ojson in_rows = ojson::array();
  s.label(0, "INTAKE");
  s.rule_under_current_row();
  s.nl();
  s.label(0, "Time");
  s.label(9, "Fluid");
  s.label(30, "Volume mL");
  s.nl();
  int n_in = rng.range(2, 4);
  for (int i = 0; i < n_in; ++i) {
    std::string tm = Clock{t0 + i * 90}.hhmm();
    std::string fluid = rng.pick(kFluids);
    int vol = 50 * rng.range(1, 20);
    s.value(0, tm);
    s.value(9, fluid);
    s.value(30, std::to_string(vol));
    s.nl();
    ojson row = ojson::object();
    row["in_time"] = tm;
    row["in_fluid"] = fluid;
    row["in_volume_ml"] = vol;
    in_rows.push_back(std::move(row));
  }
  s.nl();

  ojson md_rows = ojson::array();
  s.label(0, "Medications Dosage");
  s.rule_under_current_row();
  s.nl();
  s.label(0, "Time");
  s.label(9, "Medication");
  s.label(30, "Dose");
  s.label(42, "Route");
  s.nl();
  int n_md = rng.range(2, 5);
  for (int i = 0; i < n_md; ++i) {
    std::string tm = Clock{t0 + i * 45}.hhmm();
    std::string med = rng.pick(kMeds);
    int dose = rng.range(1, 50);
    std::string unit = rng.pick(kMedUnits);
    std::string route = rng.pick(kRoutes);
    s.value(0, tm);
    s.value(9, med);
    s.value(30, std::to_string(dose) + " " + unit);
    s.value(42, route);
    s.nl();
    ojson row = ojson::object();
    row["md_time"] = tm;
    row["md_medication"] = med;
    row["md_dose"] = dose;
    row["md_dose_unit"] = unit;
    row["md_route"] = route;
    md_rows.push_back(std::move(row));
  }
  s.nl();

  ojson out_rows = ojson::array();
  s.label(0, "OUTPUT");
  s.rule_under_current_row();
  s.nl();
  s.label(0, "Time");
  s.label(9, "Source");
  s.label(25, "Volume mL");
  s.nl();
  int n_out = rng.range(2, 4);
  for (int i = 0; i < n_out; ++i) {
    std::string tm = Clock{t0 + i * 120}.hhmm();
    std::string src = rng.pick(kSources);
    int vol = 25 * rng.range(1, 16);
    s.value(0, tm);
    s.value(9, src);
    s.value(25, std::to_string(vol));
    s.nl();
    ojson row = ojson::object();
    row["out_time"] = tm;
    row["out_source"] = src;
    row["out_volume_ml"] = vol;
    out_rows.push_back(std::move(row));
  }
  s.nl();

  ojson cm_rows = ojson::array();
  s.label(0, "Comments");
  s.rule_under_current_row();
  s.nl();
  int n_cm = rng.range(1, 3);
  for (int i = 0; i < n_cm; ++i) {
    std::string c = rng.pick(kComments);
    s.value(2, c);
    s.nl();
    ojson row = ojson::object();
    row["comment_text"] = c;
    cm_rows.push_back(std::move(row));
  }
  if (p.gray_rules) s.page_border();
  s.corner_decor();

  fi.pages = {s.page};
  fi.truth["form_id"] = fi.form_id;
  ojson fields = ojson::object();
  fields["fs_donor_id"] = id;
  fields["fs_date"] = date;
  fields["vent_mode"] = mode;
  fields["vent_rate"] = rate;
  fields["vent_fio2"] = fio2;
  fields["vent_peep"] = peep;
  fields["vent_tidal_volume_ml"] = tv;
  fi.truth["fields"] = fields;
  fi.truth["checkboxes"] = ojson::object();
  fi.truth["tables"]["vital_signs"] = vs_rows;
  fi.truth["tables"]["intake"] = in_rows;
  fi.truth["tables"]["medications_dosage"] = md_rows;
  fi.truth["tables"]["output"] = out_rows;
  fi.truth["tables"]["comments"] = cm_rows;
  return fi;
}

}  // namespace

const std::vector<std::string>& form_ids() {
  static const std::vector<std::string> ids = {
      "dcd_flowsheet",      "pre_operative_management", "flowsheet",
      "liver_data",         "kidney_perfusion_flow_sheet", "referral_worksheet"};
  return ids;
}

FormInstance make_form(const std::string& form_id, Rng& content, Rng& perturb,
                       const Perturbations& p) {
  if (form_id == "dcd_flowsheet") return make_dcd_flowsheet(content, perturb, p);
  if (form_id == "pre_operative_management") return make_preop(content, perturb, p);
  if (form_id == "flowsheet") return make_flowsheet(content, perturb, p);
  if (form_id == "liver_data") return make_liver_data(content, perturb, p);
  if (form_id == "kidney_perfusion_flow_sheet") return make_kidney_perfusion(content, perturb, p);
  if (form_id == "referral_worksheet") return make_referral(content, perturb, p);
  throw std::invalid_argument("unknown form id: " + form_id);
}

FormInstance make_paper_dcd_flowsheet() {
  // Rows 0..20: row 0 = 100/170/87/115/12/88, zeros from minute 6, NaN from 14.
  static const int kRows[14][6] = {
      {100, 170, 87, 115, 12, 88}, {108, 191, 97, 128, 27, 70}, {111, 203, 102, 136, 33, 38},
      {102, 117, 68, 84, 28, 0},   {88, 96, 63, 74, 8, 0},      {54, 72, 49, 57, 0, 0},
      {0, 0, 0, 0, 0, 0},          {0, 0, 0, 0, 0, 0},          {0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0},          {0, 0, 0, 0, 0, 0},          {0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0},          {0, 0, 0, 0, 0, 0}};

  Rng rng(20220101);   // fixed content stream for the non-tabular fields
  Rng prng(20220101);
  Perturbations none;

  FormInstance fi;
  fi.form_id = "dcd_flowsheet";

  PreOpValues pre;
  pre.withdrawal_date_iso = "2022-01-01";
  pre.withdrawal_time = "09:30";
  pre.extubated = "Yes";
  pre.extubation_time = "09:32";
  pre.box_present = true;
  pre.box_checked = true;
  pre.heparin_dosage = 30000;
  pre.heparin_dosage_unit = "units";
  pre.heparin_time = "09:35";
  pre.heparin_derived = "Yes";
  pre.comfort_care = "Yes";
  pre.comfort_care_agent = "Morphine";
  pre.morphine_dose_mg = 4;
  pre.opo_coordinator = "Maria Lopez";
  pre.attending_physician = "David Kim";
  pre.pronounced_by = "Laura Chen";
  pre.pronouncement_time = "10:09";
  pre.circulatory_arrest_time = "10:07";
  pre.incision_time = "10:15";
  pre.urine_output_ml = 400;
  pre.crystalloid_volume_ml = 1500;
  pre.flush_time = "10:18";
  pre.organs_flushed = "Both";
  pre.stray_box = false;

  std::vector<VitalsRow> vit;
  for (int i = 0; i <= 20; ++i) {
    VitalsRow r;
    r.minute = i;
    int minutes = 9 * 60 + 47 + i;
    r.timestamp = "2022-01-01 " + two(minutes / 60) + ":" + two(minutes % 60) + " EST";
    if (i >= 14) {
      r.missing = true;
    } else {
      r.hr = kRows[i][0];
      r.bps = kRows[i][1];
      r.bpd = kRows[i][2];
      r.map = kRows[i][3];
      r.rr = kRows[i][4];
      r.sao2 = kRows[i][5];
    }
    vit.push_back(r);
  }

  // Deterministic layout: same writer as the random generator, but every
  // printed variant pinned to the canonical form.
  Rng det(1);  // only consumed by variant pickers; values are pinned above
  Sheet s1(0, false, prng);
  s1.label(20, "DCD FLOWSHEET");
  s1.nl(2);
  s1.label(0, "Donor ID:");
  s1.value(12, "D000001");
  s1.label(30, "Version:");
  s1.value(41, "2.1");
  s1.nl();
  s1.label(0, "Generated:");
  s1.value(13, "2022-01-01 11:02 EST");
  s1.nl(2);
  s1.label(18, "PRE-OPERATIVE MANAGEMENT");
  s1.nl(2);
  s1.label(0, "Withdrawal Date:");
  s1.value(20, "2022-01-01");
  s1.label(40, "Withdrawal Time:");
  s1.value(60, "09:30");
  s1.nl();
  s1.label(0, "Extubated:");
  s1.value(20, "Yes");
  s1.label(40, "Extubation Time:");
  s1.value(60, "09:32");
  s1.nl();
  s1.label(0, "Heparin:");
  s1.box(10, true, 0);
  s1.label(30, "Dosage:");
  s1.value(40, "30000 units");
  s1.label(60, "Time:");
  s1.value(68, "09:35");
  s1.nl(2);
  s1.label(0, "Comfort Care:");
  s1.value(20, "Yes");
  s1.label(40, "Agent:");
  s1.value(52, "Morphine");
  s1.nl();
  s1.label(0, "Morphine Dose:");
  s1.value(20, "4 mg");
  s1.nl();
  s1.label(0, "OPO Coordinator:");
  s1.value(20, "Maria Lopez");
  s1.label(45, "Physician:");
  s1.value(58, "David Kim");
  s1.nl();
  s1.label(0, "Pronounced By:");
  s1.value(20, "Laura Chen");
  s1.label(45, "Pronouncement Time:");
  s1.value(67, "10:09");
  s1.nl();
  s1.label(0, "Circulatory Arrest Time:");
  s1.value(27, "10:07");
  s1.label(45, "Incision Time:");
  s1.value(62, "10:15");
  s1.nl();
  s1.label(0, "Urine Output:");
  s1.value(20, "400 mL");
  s1.label(45, "Crystalloid Volume:");
  s1.value(67, "1500 mL");
  s1.nl();
  s1.label(0, "Flush Time:");
  s1.value(20, "10:18");
  s1.label(45, "Organs Flushed:");
  s1.value(63, "Both");

  Sheet s2(0, false, prng);
  emit_vitals_page(s2, vit);

  fi.pages = {s1.page, s2.page};
  fi.truth["form_id"] = fi.form_id;
  ojson fields = ojson::object();
  fields["donor_id"] = "D000001";
  fields["version_note"] = "2.1";
  fields["generated_at"] = "2022-01-01 11:02 EST";
  ojson pre_truth = preop_fields_truth(pre);
  for (auto& [k, v] : pre_truth.items()) fields[k] = v;
  fi.truth["fields"] = fields;
  fi.truth["checkboxes"] = preop_checkbox_truth(pre);
  fi.truth["tables"]["dcd_flowsheet"] = vitals_truth(vit);
  (void)det;
  (void)rng;
  return fi;
}

}  // namespace formpipe::synth
