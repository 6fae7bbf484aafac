#pragma once

#include <json.hpp>

#include "formpipe/grammar/grammar.hpp"
#include "formpipe/records/records.hpp"

namespace formpipe::exporters {

// Insertion-ordered JSON keeps key order = declaration order, which makes
// the output byte-stable across runs.
using ojson = nlohmann::ordered_json;

ojson cell_json(const records::Cell& cell);
records::Cell cell_from_json(const ojson& v);

ojson field_json(const grammar::FieldValue& v);
grammar::FieldValue field_from_json(const ojson& v);

// Scalar bindings as an object, keys in grammar declaration order restricted
// to the given subform. Checkbox fields are skipped (they are reported under
// a separate "checkboxes" object by the pipeline).
ojson bindings_json(const grammar::RowBindings& bindings, const grammar::FormGrammar& grammar,
                    const std::string& subform);

// Rows of one repeat group, keys in line-token order.
ojson table_json(const std::vector<grammar::RowBindings>& rows,
                 const grammar::FormGrammar& grammar, const std::string& table);

}  // namespace formpipe::exporters
