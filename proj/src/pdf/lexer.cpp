#include "formpipe/pdf/lexer.hpp"

#include <cstdlib>

namespace formpipe::pdf {

namespace {
constexpr int kMaxNesting = 64;

bool is_number_start(unsigned char c) {
  return (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
}
}  // namespace

void Lexer::skip_ws_and_comments() {
  while (pos_ < data_.size()) {
    unsigned char c = data_[pos_];
    if (is_whitespace(c)) {
      ++pos_;
    } else if (c == '%') {
      while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
    } else {
      break;
    }
  }
}

Lexer::Token Lexer::peek() {
  if (!peeked_) peeked_ = next();
  return *peeked_;
}

Lexer::Token Lexer::next() {
  if (peeked_) {
    Token t = *peeked_;
    peeked_.reset();
    return t;
  }
  skip_ws_and_comments();
  if (pos_ >= data_.size()) return {TokType::End, "", 0.0, pos_};

  size_t start = pos_;
  unsigned char c = data_[pos_];

  if (c == '[') { ++pos_; return {TokType::ArrayOpen, "[", 0.0, start}; }
  if (c == ']') { ++pos_; return {TokType::ArrayClose, "]", 0.0, start}; }
  if (c == '<') {
    if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '<') {
      pos_ += 2;
      return {TokType::DictOpen, "<<", 0.0, start};
    }
    return lex_string_hex(start);
  }
  if (c == '>') {
    if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '>') {
      pos_ += 2;
      return {TokType::DictClose, ">>", 0.0, start};
    }
    throw PdfError(ErrorCode::LexError, "stray '>' at offset " + std::to_string(start));
  }
  if (c == '(') return lex_string_literal(start);
  if (c == ')')
    throw PdfError(ErrorCode::LexError, "unbalanced ')' at offset " + std::to_string(start));
  if (c == '/') return lex_name(start);
  if (c == '{' || c == '}') {
    // Type 4 function syntax; tolerated as keywords so content scans survive.
    ++pos_;
    return {TokType::Keyword, std::string(1, char(c)), 0.0, start};
  }

  if (is_number_start(c)) {
    size_t p = pos_;
    bool has_digit = false;
    if (data_[p] == '+' || data_[p] == '-') ++p;
    while (p < data_.size() && ((data_[p] >= '0' && data_[p] <= '9') || data_[p] == '.')) {
      if (data_[p] != '.') has_digit = true;
      ++p;
    }
    if (has_digit || (p > pos_ && data_[pos_] == '.')) {
      std::string text = data_.substr(pos_, p - pos_);
      pos_ = p;
      return {TokType::Number, text, std::strtod(text.c_str(), nullptr), start};
    }
    // "+" or "-" alone falls through to keyword lexing below.
  }

  // Regular token: operator mnemonic or keyword (true/false/null/obj/...).
  size_t p = pos_;
  while (p < data_.size() && !is_whitespace(data_[p]) && !is_delimiter(data_[p])) ++p;
  if (p == pos_)
    throw PdfError(ErrorCode::LexError, "unexpected byte at offset " + std::to_string(start));
  std::string text = data_.substr(pos_, p - pos_);
  pos_ = p;
  return {TokType::Keyword, text, 0.0, start};
}

Lexer::Token Lexer::lex_string_literal(size_t start) {
  ++pos_;  // consume '('
  std::string out;
  int depth = 1;
  while (pos_ < data_.size()) {
    unsigned char c = data_[pos_++];
    if (c == '\\') {
      if (pos_ >= data_.size()) break;
      unsigned char e = data_[pos_++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '(': out.push_back('('); break;
        case ')': out.push_back(')'); break;
        case '\\': out.push_back('\\'); break;
        case '\r':
          if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
          break;  // line continuation
        case '\n': break;
        default:
          if (e >= '0' && e <= '7') {
            int v = e - '0';
            for (int i = 0; i < 2 && pos_ < data_.size(); ++i) {
              unsigned char d = data_[pos_];
              if (d < '0' || d > '7') break;
              v = v * 8 + (d - '0');
              ++pos_;
            }
            out.push_back(char(v & 0xff));
          } else {
            out.push_back(char(e));
          }
      }
    } else if (c == '(') {
      ++depth;
      out.push_back('(');
    } else if (c == ')') {
      if (--depth == 0) return {TokType::String, out, 0.0, start};
      out.push_back(')');
    } else {
      out.push_back(char(c));
    }
  }
  throw PdfError(ErrorCode::LexError, "unterminated string at offset " + std::to_string(start));
}

Lexer::Token Lexer::lex_string_hex(size_t start) {
  ++pos_;  // consume '<'
  std::string out;
  int hi = -1;
  while (pos_ < data_.size()) {
    unsigned char c = data_[pos_++];
    if (c == '>') {
      if (hi >= 0) out.push_back(char(hi << 4));
      return {TokType::String, out, 0.0, start};
    }
    if (is_whitespace(c)) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else
      throw PdfError(ErrorCode::LexError, "bad hex digit at offset " + std::to_string(pos_ - 1));
    if (hi < 0) hi = v;
    else {
      out.push_back(char((hi << 4) | v));
      hi = -1;
    }
  }
  throw PdfError(ErrorCode::LexError, "unterminated hex string at offset " + std::to_string(start));
}

Lexer::Token Lexer::lex_name(size_t start) {
  ++pos_;  // consume '/'
  std::string out;
  while (pos_ < data_.size() && !is_whitespace(data_[pos_]) && !is_delimiter(data_[pos_])) {
    unsigned char c = data_[pos_++];
    if (c == '#' && pos_ + 1 < data_.size()) {
      auto hexv = [](unsigned char h) -> int {
        if (h >= '0' && h <= '9') return h - '0';
        if (h >= 'a' && h <= 'f') return h - 'a' + 10;
        if (h >= 'A' && h <= 'F') return h - 'A' + 10;
        return -1;
      };
      int a = hexv(data_[pos_]), b = hexv(data_[pos_ + 1]);
      if (a >= 0 && b >= 0) {
        out.push_back(char((a << 4) | b));
        pos_ += 2;
        continue;
      }
    }
    out.push_back(char(c));
  }
  return {TokType::Name, out, 0.0, start};
}

PdfValue Lexer::parse_object(int depth) {
  if (depth > kMaxNesting)
    throw PdfError(ErrorCode::LexError, "nesting too deep at offset " + std::to_string(pos_));

  Token t = next();
  switch (t.type) {
    case TokType::Number: {
      // Look ahead for "gen R" to form an indirect reference.
      size_t save = pos_;
      std::optional<Token> save_peek = peeked_;
      Token t2 = next();
      if (t2.type == TokType::Number) {
        Token t3 = next();
        if (t3.type == TokType::Keyword && t3.text == "R") {
          return PdfValue(ObjRef{int(t.number), int(t2.number)});
        }
      }
      pos_ = save;
      peeked_ = save_peek;
      return PdfValue(t.number);
    }
    case TokType::String:
      return PdfValue(Bytes(t.text));
    case TokType::Name:
      return PdfValue(PdfValue::Name{t.text});
    case TokType::ArrayOpen: {
      PdfValue::Array arr;
      while (true) {
        Token p = peek();
        if (p.type == TokType::ArrayClose) {
          next();
          break;
        }
        if (p.type == TokType::End)
          throw PdfError(ErrorCode::LexError, "unterminated array at offset " + std::to_string(t.offset));
        arr.push_back(parse_object(depth + 1));
      }
      return PdfValue(std::move(arr));
    }
    case TokType::DictOpen: {
      Dict d;
      while (true) {
        Token p = next();
        if (p.type == TokType::DictClose) break;
        if (p.type != TokType::Name)
          throw PdfError(ErrorCode::LexError, "dict key is not a name at offset " + std::to_string(p.offset));
        d.set(p.text, parse_object(depth + 1));
      }
      return PdfValue(std::move(d));
    }
    case TokType::Keyword: {
      if (t.text == "true") return PdfValue(true);
      if (t.text == "false") return PdfValue(false);
      if (t.text == "null") return PdfValue();
      throw PdfError(ErrorCode::LexError,
                     "unexpected keyword '" + t.text + "' at offset " + std::to_string(t.offset));
    }
    default:
      throw PdfError(ErrorCode::LexError, "unexpected end of input");
  }
}

}  // namespace formpipe::pdf
