#pragma once

#include <string>
#include <vector>

#include "formpipe/pdf/value.hpp"

namespace formpipe::pdf {

enum class OpClass { Text, Graphics, State };

// One content-stream operator with the operands that preceded it.
struct Operator {
  std::string name;
  std::vector<PdfValue> operands;
  OpClass cls = OpClass::State;
};

// Classification is a pure function of the mnemonic; unknown names are State.
OpClass classify_operator(const std::string& name);

// Splits a decoded content stream into operators. Operands attach to the
// operator that follows them. Raises LexError (with offset) on unbalanced
// strings/arrays.
std::vector<Operator> tokenize_content(const Bytes& decoded);

// Re-emits operators as content-stream text. Used by the generator and by
// round-trip tests; tokenize(serialize(ops)) == ops.
Bytes serialize_content(const std::vector<Operator>& ops);

}  // namespace formpipe::pdf
