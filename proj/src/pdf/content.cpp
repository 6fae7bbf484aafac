#include "formpipe/pdf/content.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "formpipe/pdf/lexer.hpp"

namespace formpipe::pdf {

OpClass classify_operator(const std::string& name) {
  static const std::set<std::string> kText = {
      "BT", "ET", "Tf", "Td", "TD", "Tm", "T*", "Tj", "TJ", "'", "\"",
  };
  static const std::set<std::string> kGraphics = {
      "m", "l", "c", "re", "h", "S", "s", "f", "F", "f*", "B", "B*", "b", "b*", "n",
  };
  if (kText.count(name)) return OpClass::Text;
  if (kGraphics.count(name)) return OpClass::Graphics;
  return OpClass::State;
}

std::vector<Operator> tokenize_content(const Bytes& decoded) {
  std::vector<Operator> ops;
  std::vector<PdfValue> operands;
  Lexer lex(decoded);
  for (;;) {
    Lexer::Token t = lex.peek();
    if (t.type == Lexer::TokType::End) break;
    switch (t.type) {
      case Lexer::TokType::Number:
      case Lexer::TokType::String:
      case Lexer::TokType::Name:
      case Lexer::TokType::ArrayOpen:
      case Lexer::TokType::DictOpen:
        operands.push_back(lex.parse_object());
        break;
      case Lexer::TokType::Keyword: {
        lex.next();
        if (t.text == "true") { operands.push_back(PdfValue(true)); break; }
        if (t.text == "false") { operands.push_back(PdfValue(false)); break; }
        if (t.text == "null") { operands.push_back(PdfValue()); break; }
        if (t.text == "BI") {
          // Inline image: skip through EI. Rare; preserved as a State op
          // with no operands so downstream passes see its presence.
          size_t e = decoded.find("EI", lex.pos());
          lex.seek(e == Bytes::npos ? decoded.size() : e + 2);
          ops.push_back({"BI", {}, OpClass::State});
          operands.clear();
          break;
        }
        Operator op;
        op.name = t.text;
        op.operands = std::move(operands);
        op.cls = classify_operator(op.name);
        operands = {};
        ops.push_back(std::move(op));
        break;
      }
      default:
        throw PdfError(ErrorCode::LexError,
                       "unexpected token in content stream at offset " + std::to_string(t.offset));
    }
  }
  // Trailing operands with no operator are dropped (viewers tolerate this).
  return ops;
}

namespace {

void write_number(std::string& out, double d) {
  if (d == (long long)d && std::abs(d) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", (long long)d);
    out += buf;
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", d);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  out += s;
}

void write_string(std::string& out, const Bytes& s) {
  out += '(';
  for (unsigned char c : s) {
    switch (c) {
      case '(': out += "\\("; break;
      case ')': out += "\\)"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 32 || c > 126) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\%03o", c);
          out += buf;
        } else {
          out += char(c);
        }
    }
  }
  out += ')';
}

void write_value(std::string& out, const PdfValue& v) {
  if (v.is_null()) { out += "null"; return; }
  if (auto* b = std::get_if<bool>(&v.v)) { out += *b ? "true" : "false"; return; }
  if (v.is_number()) { write_number(out, v.number_or(0)); return; }
  if (v.is_string()) { write_string(out, *v.str()); return; }
  if (v.name()) { out += '/'; out += *v.name(); return; }
  if (v.is_ref()) {
    out += std::to_string(v.ref()->num) + " " + std::to_string(v.ref()->gen) + " R";
    return;
  }
  if (v.is_array()) {
    out += '[';
    bool first = true;
    for (const PdfValue& item : *v.array()) {
      if (!first) out += ' ';
      first = false;
      write_value(out, item);
    }
    out += ']';
    return;
  }
  if (v.is_dict()) {
    out += "<<";
    for (const auto& [k, val] : v.dict()->entries()) {
      out += " /" + k + " ";
      write_value(out, val);
    }
    out += " >>";
    return;
  }
}

}  // namespace

Bytes serialize_content(const std::vector<Operator>& ops) {
  std::string out;
  for (const Operator& op : ops) {
    for (const PdfValue& operand : op.operands) {
      write_value(out, operand);
      out += ' ';
    }
    out += op.name;
    out += '\n';
  }
  return out;
}

}  // namespace formpipe::pdf
