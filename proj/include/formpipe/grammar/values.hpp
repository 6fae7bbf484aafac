#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formpipe/grammar/grammar.hpp"

namespace formpipe::grammar {

// Canonical "HH:MM" from "935", "0935", "9:35" or "09:35"; nullopt when the
// digits do not form a valid time of day.
std::optional<std::string> canonical_time(const std::string& raw);

// Canonical "YYYY-MM-DD" from ISO or M/D/YYYY; nullopt when not a real date.
std::optional<std::string> canonical_date(const std::string& raw);

// Categorical canonicalization. Identity on canonical labels (idempotent);
// values outside the table are preserved raw and flagged via *mapped.
std::string canonicalize(const FieldSpec& spec, const std::string& raw, bool* mapped);

// Typed-value parse per field kind; nullopt signals TypedValueError
// (the pattern matched but the text is not a valid value of the kind).
std::optional<FieldValue> parse_typed(const FieldSpec& spec, const std::string& raw,
                                      std::vector<std::string>* warnings);

// Default regex fragment used when a field declares no pattern.
std::string default_pattern(FieldKind kind);

}  // namespace formpipe::grammar
