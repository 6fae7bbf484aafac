#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "formpipe/pdf/errors.hpp"
#include "formpipe/pdf/value.hpp"

namespace formpipe::pdf {

// Token-level scanner over a PDF byte buffer. Shared by the document parser
// and the content-stream tokenizer; both speak the same object syntax.
class Lexer {
public:
  enum class TokType {
    Number,
    Name,          // /Foo
    String,        // (..) or <hex>
    ArrayOpen,     // [
    ArrayClose,    // ]
    DictOpen,      // <<
    DictClose,     // >>
    Keyword,       // obj, endobj, stream, true, null, operators, ...
    End,
  };

  struct Token {
    TokType type = TokType::End;
    std::string text;    // keyword/name text, decoded string bytes
    double number = 0.0;
    size_t offset = 0;   // byte offset of the token start
  };

  Lexer(const Bytes& data, size_t pos = 0) : data_(data), pos_(pos) {}

  Token next();
  Token peek();
  size_t pos() const { return pos_; }
  void seek(size_t p) { pos_ = p; peeked_.reset(); }
  const Bytes& data() const { return data_; }

  // Reads a complete object starting at the next token. Depth-capped so
  // hostile input cannot blow the stack.
  PdfValue parse_object(int depth = 0);

  static bool is_whitespace(unsigned char c) {
    return c == 0 || c == '\t' || c == '\n' || c == '\f' || c == '\r' || c == ' ';
  }
  static bool is_delimiter(unsigned char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' ||
           c == '{' || c == '}' || c == '/' || c == '%';
  }

private:
  void skip_ws_and_comments();
  Token lex_string_literal(size_t start);
  Token lex_string_hex(size_t start);
  Token lex_name(size_t start);

  const Bytes& data_;
  size_t pos_ = 0;
  std::optional<Token> peeked_;
};

}  // namespace formpipe::pdf
