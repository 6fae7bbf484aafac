#pragma once

#include <boost/regex.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace formpipe::grammar {

enum class FieldKind { Categorical, Date, Time, Number, PersonName, FreeText, CheckboxAnchor };

// One named token of a form: its value shape and, for checkboxes, where on
// the page the drawn box is expected (grid cells).
struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::FreeText;
  std::string pattern;  // regex fragment without captures; empty = kind default
  std::vector<std::pair<std::string, std::string>> canon;  // variant -> canonical label
  bool has_anchor = false;
  int anchor_page = 0;
  int anchor_row = 0;
  int anchor_col = 0;
  std::string subform;  // origin subform id ("" = declared on the form itself)
};

enum class LineKind { Once, Optional, Repeat, Blank };

struct LinePattern {
  LineKind kind = LineKind::Once;
  std::string source;      // as written in the grammar file
  std::string core;        // compiled fragment (elastic + macros), unanchored
  bool exact = false;      // exact-column mode: spaces stay literal
  std::string table;       // Repeat: name of the row group
  std::vector<std::string> tokens;  // tokens that can bind on this line
  std::string subform;     // origin subform id ("" = declared on the form itself)
  boost::regex compiled;   // anchored single-line pattern
};

struct FormGrammar {
  std::string form_id;
  std::string title_source;
  boost::regex title_pattern;
  bool subform_only = false;       // never returned by identify_form
  bool allow_blank_lines = false;  // tolerate inserted blank lines anywhere
  std::vector<FieldSpec> fields;   // declaration order (positional checkbox binding)
  std::vector<LinePattern> lines;
  std::vector<std::string> subform_ids;  // spliced subforms, in order
  std::string composed_source;     // line cores joined by separators
  boost::regex composed;           // the full-page pattern

  const FieldSpec* field(const std::string& name) const;
};

// One captured value. Times, dates and categorical labels canonicalize to
// text; numbers keep integral-ness so exports can print 30000, not 30000.0.
struct FieldValue {
  enum class Type { Missing, Number, Text };
  Type type = Type::Missing;
  std::string raw;
  std::string text;
  double number = 0;
  bool integral = false;

  bool missing() const { return type == Type::Missing; }
  static FieldValue missing_value() { return {}; }
};

using RowBindings = std::map<std::string, FieldValue>;

struct ParseResult {
  std::string form_id;
  RowBindings bindings;                                  // scalar tokens
  std::map<std::string, std::vector<RowBindings>> tables;  // repeat groups
  std::vector<std::string> diagnostics;
};

struct ParseFailure {
  std::string form_id;
  enum class Kind { NoMatch, TypedValueError } kind = Kind::NoMatch;
  int first_unmatched_line = -1;  // index into the page lines
  std::string unmatched_text;
  int matched_prefix_lines = 0;   // line patterns satisfied before the failure
};

using ParseOutcome = std::variant<ParseResult, ParseFailure>;

inline bool parsed_ok(const ParseOutcome& o) { return std::holds_alternative<ParseResult>(o); }

enum class GrammarErrorCode {
  DuplicateTokenName,
  PatternCompileError,
  UnknownSubform,
  BadGrammarFile,
  ContractViolation,
};

class GrammarError : public std::runtime_error {
public:
  GrammarError(GrammarErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GrammarErrorCode code() const { return code_; }

private:
  GrammarErrorCode code_;
};

// Builds and validates a grammar: expands {token} macros against fields,
// applies elastic whitespace, compiles every line and the composed pattern.
// Subform ids must already be spliced by the registry before calling.
FormGrammar compose_grammar(const std::string& form_id, const std::string& title_pattern,
                            std::vector<LinePattern> lines, std::vector<FieldSpec> fields,
                            bool subform_only = false, bool allow_blank_lines = false);

// Incremental line-by-line parse; on success bindings carry every token
// (absent optionals bind Missing). Failures identify the first line that
// did not match. Never throws for page-shaped input.
ParseOutcome parse_form(const FormGrammar& grammar, const std::vector<std::string>& lines);

// True iff the composed single-pattern match accepts the page. Kept distinct
// from parse_form so the bottom-up composition stays auditable.
bool composed_matches(const FormGrammar& grammar, const std::vector<std::string>& lines);

struct EvaluationReport {
  int total = 0;
  int successes = 0;
  double parse_rate = 0.0;
  struct Cluster {
    std::string shape;  // unmatched line with digits masked
    int count = 0;
    int matched_prefix_lines = 0;
    std::string example_text;
  };
  std::vector<Cluster> clusters;  // most frequent first
};

// Runs the grammar over a corpus of pages and clusters the failures by the
// shape of the first unmatched line, to guide the next refinement pass.
EvaluationReport evaluate_grammar(const FormGrammar& grammar,
                                  const std::vector<std::vector<std::string>>& corpus);

// Strips leading/trailing blank lines; parsing operates on the interior.
std::vector<std::string> trim_blank_edges(const std::vector<std::string>& lines);

}  // namespace formpipe::grammar
