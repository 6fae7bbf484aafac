#pragma once

#include <stdexcept>
#include <string>

namespace formpipe::pdf {

enum class ErrorCode {
  MalformedHeader,
  BrokenXref,
  EncryptedDocument,
  DanglingReference,
  UnsupportedFilter,
  LexError,
  BadStructure,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::BrokenXref: return "BrokenXref";
    case ErrorCode::EncryptedDocument: return "EncryptedDocument";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnsupportedFilter: return "UnsupportedFilter";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::BadStructure: return "BadStructure";
  }
  return "Unknown";
}

// Every failure surfaced by the PDF layer is a PdfError; callers that must
// not abort (batch driver, fuzzing) catch this one type.
class PdfError : public std::runtime_error {
public:
  PdfError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace formpipe::pdf
