#include "formpipe/exporters/json.hpp"

#include <cmath>

namespace formpipe::exporters {

ojson cell_json(const records::Cell& cell) {
  using T = records::Cell::Type;
  switch (cell.type) {
    case T::Null:
      return nullptr;
    case T::Int:
      return cell.i;
    case T::Real:
      return cell.r;
    case T::Bool:
      return cell.b;
    case T::Text:
      return cell.s;
  }
  return nullptr;
}

records::Cell cell_from_json(const ojson& v) {
  if (v.is_null()) return records::Cell::null();
  if (v.is_boolean()) return records::Cell::boolean(v.get<bool>());
  if (v.is_number_integer()) return records::Cell::integer(v.get<long long>());
  if (v.is_number()) return records::Cell::real(v.get<double>());
  return records::Cell::text(v.get<std::string>());
}

ojson field_json(const grammar::FieldValue& v) {
  using T = grammar::FieldValue::Type;
  switch (v.type) {
    case T::Missing:
      return nullptr;
    case T::Number:
      if (v.integral && std::abs(v.number) < 9.0e15) return (long long)v.number;
      return v.number;
    case T::Text:
      return v.text;
  }
  return nullptr;
}

grammar::FieldValue field_from_json(const ojson& v) {
  grammar::FieldValue out;
  if (v.is_null()) return out;
  if (v.is_number()) {
    out.type = grammar::FieldValue::Type::Number;
    out.number = v.get<double>();
    out.integral = v.is_number_integer();
    return out;
  }
  out.type = grammar::FieldValue::Type::Text;
  out.text = v.get<std::string>();
  return out;
}

ojson bindings_json(const grammar::RowBindings& bindings, const grammar::FormGrammar& grammar,
                    const std::string& subform) {
  ojson out = ojson::object();
  for (const grammar::FieldSpec& f : grammar.fields) {
    if (f.subform != subform) continue;
    if (f.kind == grammar::FieldKind::CheckboxAnchor) continue;
    auto it = bindings.find(f.name);
    if (it == bindings.end()) continue;
    out[f.name] = field_json(it->second);
  }
  return out;
}

ojson table_json(const std::vector<grammar::RowBindings>& rows,
                 const grammar::FormGrammar& grammar, const std::string& table) {
  const grammar::LinePattern* line = nullptr;
  for (const grammar::LinePattern& lp : grammar.lines)
    if (lp.kind == grammar::LineKind::Repeat && lp.table == table) line = &lp;
  ojson out = ojson::array();
  for (const grammar::RowBindings& row : rows) {
    ojson r = ojson::object();
    if (line) {
      for (const std::string& t : line->tokens) {
        auto it = row.find(t);
        r[t] = it == row.end() ? ojson(nullptr) : field_json(it->second);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace formpipe::exporters
