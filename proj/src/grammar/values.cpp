#include "formpipe/grammar/values.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace formpipe::grammar {

namespace {
std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return isdigit(c); });
}
}  // namespace

std::optional<std::string> canonical_time(const std::string& raw) {
  std::string s = trim(raw);
  int hh = -1, mm = -1;
  size_t colon = s.find(':');
  if (colon != std::string::npos) {
    std::string h = s.substr(0, colon), m = s.substr(colon + 1);
    if (!all_digits(h) || m.size() != 2 || !all_digits(m)) return std::nullopt;
    hh = atoi(h.c_str());
    mm = atoi(m.c_str());
  } else if (all_digits(s) && (s.size() == 3 || s.size() == 4)) {
    // Ambiguous 4-digit (or 3-digit) form reads as HH:MM.
    std::string h = s.substr(0, s.size() - 2), m = s.substr(s.size() - 2);
    hh = atoi(h.c_str());
    mm = atoi(m.c_str());
  } else {
    return std::nullopt;
  }
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59) return std::nullopt;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", hh, mm);
  return std::string(buf);
}

namespace {
bool valid_ymd(int y, int m, int d) {
  if (y < 1800 || y > 2200 || m < 1 || m > 12 || d < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int dim = days[m - 1];
  if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) dim = 29;
  return d <= dim;
}
}  // namespace

std::optional<std::string> canonical_date(const std::string& raw) {
  std::string s = trim(raw);
  int y = 0, m = 0, d = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d", &y, &m, &d) == 3 && s.size() == 10) {
    if (!valid_ymd(y, m, d)) return std::nullopt;
  } else if (std::sscanf(s.c_str(), "%2d/%2d/%4d", &m, &d, &y) == 3) {
    if (!valid_ymd(y, m, d)) return std::nullopt;
  } else {
    return std::nullopt;
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return std::string(buf);
}

std::string canonicalize(const FieldSpec& spec, const std::string& raw, bool* mapped) {
  std::string v = trim(raw);
  if (mapped) *mapped = true;
  if (spec.canon.empty()) return v;
  for (const auto& [variant, canonical] : spec.canon) {
    if (v == variant || v == canonical) return canonical;
  }
  // Case-insensitive second chance.
  std::string lower = v;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return char(tolower(c)); });
  for (const auto& [variant, canonical] : spec.canon) {
    std::string lv = variant;
    std::transform(lv.begin(), lv.end(), lv.begin(),
                   [](unsigned char c) { return char(tolower(c)); });
    if (lower == lv) return canonical;
  }
  if (mapped) *mapped = false;
  return v;
}

std::optional<FieldValue> parse_typed(const FieldSpec& spec, const std::string& raw,
                                      std::vector<std::string>* warnings) {
  FieldValue out;
  out.raw = raw;
  std::string v = trim(raw);
  if (v.empty()) return FieldValue::missing_value();

  switch (spec.kind) {
    case FieldKind::Number: {
      std::string digits;
      for (char c : v)
        if (c != ',') digits.push_back(c);
      char* end = nullptr;
      double num = std::strtod(digits.c_str(), &end);
      if (end == digits.c_str() || *end != '\0') return std::nullopt;
      out.type = FieldValue::Type::Number;
      out.number = num;
      out.integral = num == (long long)num;
      out.text = digits;
      return out;
    }
    case FieldKind::Time: {
      auto t = canonical_time(v);
      if (!t) return std::nullopt;
      out.type = FieldValue::Type::Text;
      out.text = *t;
      return out;
    }
    case FieldKind::Date: {
      auto d = canonical_date(v);
      if (!d) return std::nullopt;
      out.type = FieldValue::Type::Text;
      out.text = *d;
      return out;
    }
    case FieldKind::Categorical: {
      bool mapped = true;
      out.type = FieldValue::Type::Text;
      out.text = canonicalize(spec, v, &mapped);
      if (!mapped && warnings)
        warnings->push_back("unmapped categorical value '" + v + "' for " + spec.name);
      return out;
    }
    case FieldKind::PersonName:
    case FieldKind::FreeText:
    case FieldKind::CheckboxAnchor: {
      out.type = FieldValue::Type::Text;
      out.text = v;
      return out;
    }
  }
  return std::nullopt;
}

std::string default_pattern(FieldKind kind) {
  switch (kind) {
    case FieldKind::Number:
      return "-?[0-9][0-9,]*(?:\\.[0-9]+)?";
    case FieldKind::Time:
      return "(?:[0-9]{1,2}:[0-9]{2}|[0-9]{3,4})";
    case FieldKind::Date:
      return "(?:[0-9]{4}-[0-9]{2}-[0-9]{2}|[0-9]{1,2}/[0-9]{1,2}/[0-9]{4})";
    case FieldKind::PersonName:
      return "[A-Z][A-Za-z.'-]*(?:,? [A-Z][A-Za-z.'-]*)*";
    case FieldKind::Categorical:
    case FieldKind::FreeText:
    case FieldKind::CheckboxAnchor:
      return "\\S(?:.*\\S)?";
  }
  return "\\S+";
}

}  // namespace formpipe::grammar
