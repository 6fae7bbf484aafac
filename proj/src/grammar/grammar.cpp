#include "formpipe/grammar/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "formpipe/grammar/values.hpp"

namespace formpipe::grammar {

const FieldSpec* FormGrammar::field(const std::string& name) const {
  for (const FieldSpec& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

namespace {

bool blank_line(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

// Elastic whitespace: every run of literal spaces matches any horizontal gap.
std::string elasticize(const std::string& src) {
  std::string out;
  size_t i = 0;
  while (i < src.size()) {
    if (src[i] == ' ') {
      while (i < src.size() && src[i] == ' ') ++i;
      out += "[ \\t]+";
    } else {
      out += src[i++];
    }
  }
  return out;
}

// Replaces {token} / {token?} with named capture groups built from fields.
std::string expand_macros(const std::string& src, const std::vector<FieldSpec>& fields,
                          std::vector<std::string>& tokens_out, const std::string& where) {
  std::string out;
  size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c != '{') {
      out += c;
      ++i;
      continue;
    }
    size_t close = src.find('}', i);
    std::string inner = close == std::string::npos ? "" : src.substr(i + 1, close - i - 1);
    bool optional = !inner.empty() && inner.back() == '?';
    std::string name = optional ? inner.substr(0, inner.size() - 1) : inner;
    auto is_ident = [](const std::string& s) {
      if (s.empty() || !(isalpha((unsigned char)s[0]) || s[0] == '_')) return false;
      return std::all_of(s.begin(), s.end(),
                         [](unsigned char ch) { return isalnum(ch) || ch == '_'; });
    };
    if (close == std::string::npos || !is_ident(name)) {
      // Not a macro (e.g. a {2,3} quantifier); copy verbatim.
      out += c;
      ++i;
      continue;
    }
    const FieldSpec* spec = nullptr;
    for (const FieldSpec& f : fields)
      if (f.name == name) spec = &f;
    if (!spec)
      throw GrammarError(GrammarErrorCode::PatternCompileError,
                         where + ": unknown field '" + name + "'");
    if (spec->kind == FieldKind::CheckboxAnchor)
      throw GrammarError(GrammarErrorCode::PatternCompileError,
                         where + ": checkbox field '" + name + "' cannot appear in a line");
    std::string pat = spec->pattern.empty() ? default_pattern(spec->kind) : spec->pattern;
    out += "(?<" + name + ">" + pat + ")";
    if (optional) out += "?";
    tokens_out.push_back(name);
    i = close + 1;
  }
  return out;
}

std::string anchored(const std::string& core, bool exact) {
  if (core.empty()) return "^[ \\t]*$";
  if (exact) return "^(?:" + core + ")$";
  return "^[ \\t]*(?:" + core + ")[ \\t]*$";
}

boost::regex compile(const std::string& pattern, const std::string& where) {
  try {
    return boost::regex(pattern);
  } catch (const boost::regex_error& e) {
    throw GrammarError(GrammarErrorCode::PatternCompileError,
                       where + ": " + e.what() + " in: " + pattern);
  }
}

}  // namespace

FormGrammar compose_grammar(const std::string& form_id, const std::string& title_pattern,
                            std::vector<LinePattern> lines, std::vector<FieldSpec> fields,
                            bool subform_only, bool allow_blank_lines) {
  if (lines.empty())
    throw GrammarError(GrammarErrorCode::PatternCompileError,
                       form_id + ": a grammar needs at least one line pattern");

  FormGrammar g;
  g.form_id = form_id;
  g.subform_only = subform_only;
  g.allow_blank_lines = allow_blank_lines;
  g.title_source = title_pattern;
  g.title_pattern = compile(elasticize(title_pattern), form_id + " title");

  std::set<std::string> names;
  for (const FieldSpec& f : fields) {
    if (!names.insert(f.name).second)
      throw GrammarError(GrammarErrorCode::DuplicateTokenName,
                         form_id + ": duplicate token name '" + f.name + "'");
    if (f.kind == FieldKind::CheckboxAnchor && !f.has_anchor)
      throw GrammarError(GrammarErrorCode::BadGrammarFile,
                         form_id + ": checkbox field '" + f.name + "' has no anchor");
  }
  g.fields = std::move(fields);

  std::set<std::string> bound;
  for (size_t i = 0; i < lines.size(); ++i) {
    LinePattern& lp = lines[i];
    std::string where = form_id + " line " + std::to_string(i + 1);
    if (lp.kind == LineKind::Blank) {
      lp.core.clear();
      lp.compiled = compile("^[ \\t]*$", where);
      continue;
    }
    if (lp.kind == LineKind::Repeat && lp.table.empty())
      throw GrammarError(GrammarErrorCode::BadGrammarFile, where + ": repeat needs a table name");
    std::string pre = lp.exact ? lp.source : elasticize(lp.source);
    lp.tokens.clear();
    lp.core = expand_macros(pre, g.fields, lp.tokens, where);
    for (const std::string& t : lp.tokens) {
      // Tokens may bind on exactly one line (repeat rows re-bind per row).
      if (!bound.insert(t).second)
        throw GrammarError(GrammarErrorCode::DuplicateTokenName,
                           where + ": token '" + t + "' already bound on an earlier line");
    }
    lp.compiled = compile(anchored(lp.core, lp.exact), where);
  }
  if (lines[0].kind == LineKind::Repeat || lines[0].kind == LineKind::Optional)
    throw GrammarError(GrammarErrorCode::BadGrammarFile,
                       form_id + ": first line pattern must be mandatory");
  g.lines = std::move(lines);

  // Composed page pattern: line cores joined by newline separators. This is
  // the concatenation the bottom-up construction promises; parse_form walks
  // the same pieces one line at a time.
  const std::string sep = g.allow_blank_lines ? "\\n(?:[ \\t]*\\n)*" : "\\n";
  std::string composed;
  bool first = true;
  for (const LinePattern& lp : g.lines) {
    // With blank-line tolerance the separator already absorbs blank runs, so
    // explicit blank entries contribute nothing (zero-or-more semantics,
    // matching the incremental walk).
    if (g.allow_blank_lines && lp.kind == LineKind::Blank) continue;
    std::string piece = lp.kind == LineKind::Blank
                            ? "[ \\t]*"
                            : (lp.exact ? "(?:" + lp.core + ")"
                                        : "[ \\t]*(?:" + lp.core + ")[ \\t]*");
    if (first) {
      composed += piece;
      first = false;
      continue;
    }
    switch (lp.kind) {
      case LineKind::Once:
      case LineKind::Blank:
        composed += sep + piece;
        break;
      case LineKind::Optional:
        composed += "(?:" + sep + piece + ")?";
        break;
      case LineKind::Repeat:
        composed += "(?:" + sep + piece + ")*";
        break;
    }
  }
  g.composed_source = composed;
  g.composed = compile("^(?:" + composed + ")$", form_id + " composed");
  return g;
}

std::vector<std::string> trim_blank_edges(const std::vector<std::string>& lines) {
  size_t a = 0, b = lines.size();
  while (a < b && blank_line(lines[a])) ++a;
  while (b > a && blank_line(lines[b - 1])) --b;
  return {lines.begin() + a, lines.begin() + b};
}

namespace {

// Binds every token of a matched line. Returns false on a typed-value error.
bool bind_tokens(const LinePattern& lp, const FormGrammar& g, const boost::smatch& m,
                 RowBindings& out, std::vector<std::string>* warnings) {
  for (const std::string& t : lp.tokens) {
    const FieldSpec* spec = g.field(t);
    const auto& sub = m[t];
    if (!sub.matched) {
      out[t] = FieldValue::missing_value();
      continue;
    }
    auto v = parse_typed(*spec, sub.str(), warnings);
    if (!v) return false;
    out[t] = std::move(*v);
  }
  return true;
}

}  // namespace

ParseOutcome parse_form(const FormGrammar& grammar, const std::vector<std::string>& input_lines) {
  std::vector<std::string> lines = trim_blank_edges(input_lines);
  const size_t n = lines.size();

  ParseResult result;
  result.form_id = grammar.form_id;
  // Every scalar token starts Missing so absent optional lines still bind.
  for (const LinePattern& lp : grammar.lines)
    if (lp.kind != LineKind::Repeat)
      for (const std::string& t : lp.tokens) result.bindings[t] = FieldValue::missing_value();
  for (const LinePattern& lp : grammar.lines)
    if (lp.kind == LineKind::Repeat) result.tables[lp.table];

  size_t i = 0;
  int matched_patterns = 0;

  auto fail = [&](size_t at, ParseFailure::Kind kind) -> ParseOutcome {
    ParseFailure f;
    f.form_id = grammar.form_id;
    f.kind = kind;
    f.first_unmatched_line = int(at < n ? at : n);
    f.unmatched_text = at < n ? lines[at] : "<end of page>";
    f.matched_prefix_lines = matched_patterns;
    return f;
  };

  auto skip_blanks = [&]() {
    if (grammar.allow_blank_lines)
      while (i < n && blank_line(lines[i])) ++i;
  };

  boost::smatch m;
  for (const LinePattern& lp : grammar.lines) {
    switch (lp.kind) {
      case LineKind::Blank: {
        if (grammar.allow_blank_lines) {
          skip_blanks();
          break;
        }
        if (i < n && blank_line(lines[i])) {
          ++i;
          ++matched_patterns;
        } else {
          return fail(i, ParseFailure::Kind::NoMatch);
        }
        break;
      }
      case LineKind::Once: {
        skip_blanks();
        if (i < n && boost::regex_match(lines[i], m, lp.compiled)) {
          if (!bind_tokens(lp, grammar, m, result.bindings, &result.diagnostics))
            return fail(i, ParseFailure::Kind::TypedValueError);
          ++i;
          ++matched_patterns;
        } else {
          return fail(i, ParseFailure::Kind::NoMatch);
        }
        break;
      }
      case LineKind::Optional: {
        size_t save = i;
        skip_blanks();
        if (i < n && boost::regex_match(lines[i], m, lp.compiled)) {
          if (!bind_tokens(lp, grammar, m, result.bindings, &result.diagnostics))
            return fail(i, ParseFailure::Kind::TypedValueError);
          ++i;
          ++matched_patterns;
        } else {
          i = save;
        }
        break;
      }
      case LineKind::Repeat: {
        auto& rows = result.tables[lp.table];
        for (;;) {
          size_t save = i;
          skip_blanks();
          if (i < n && boost::regex_match(lines[i], m, lp.compiled)) {
            RowBindings row;
            if (!bind_tokens(lp, grammar, m, row, &result.diagnostics))
              return fail(i, ParseFailure::Kind::TypedValueError);
            rows.push_back(std::move(row));
            ++i;
          } else {
            i = save;
            break;
          }
        }
        ++matched_patterns;
        break;
      }
    }
  }
  skip_blanks();
  if (i != n) return fail(i, ParseFailure::Kind::NoMatch);
  return result;
}

bool composed_matches(const FormGrammar& grammar, const std::vector<std::string>& input_lines) {
  std::vector<std::string> lines = trim_blank_edges(input_lines);
  std::string page;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i) page += '\n';
    page += lines[i];
  }
  return boost::regex_match(page, grammar.composed);
}

EvaluationReport evaluate_grammar(const FormGrammar& grammar,
                                  const std::vector<std::vector<std::string>>& corpus) {
  if (corpus.empty())
    throw GrammarError(GrammarErrorCode::ContractViolation, "evaluate_grammar: empty corpus");

  EvaluationReport report;
  report.total = int(corpus.size());

  auto shape_of = [](const std::string& s) {
    std::string out;
    bool in_space = false;
    for (unsigned char c : s) {
      if (c == ' ' || c == '\t') {
        if (!in_space) out += ' ';
        in_space = true;
      } else {
        in_space = false;
        out += isdigit(c) ? '#' : char(c);
      }
    }
    return out;
  };

  std::map<std::pair<int, std::string>, EvaluationReport::Cluster> clusters;
  for (const auto& page : corpus) {
    ParseOutcome o = parse_form(grammar, page);
    if (parsed_ok(o)) {
      ++report.successes;
      continue;
    }
    const ParseFailure& f = std::get<ParseFailure>(o);
    std::string shape = shape_of(f.unmatched_text);
    auto key = std::make_pair(f.matched_prefix_lines, shape);
    auto it = clusters.find(key);
    if (it == clusters.end()) {
      EvaluationReport::Cluster c;
      c.shape = shape;
      c.count = 1;
      c.matched_prefix_lines = f.matched_prefix_lines;
      c.example_text = f.unmatched_text;
      clusters.emplace(key, std::move(c));
    } else {
      ++it->second.count;
    }
  }
  report.parse_rate = double(report.successes) / double(report.total);
  for (auto& [key, c] : clusters) report.clusters.push_back(std::move(c));
  std::sort(report.clusters.begin(), report.clusters.end(),
            [](const auto& a, const auto& b) { return a.count > b.count; });
  return report;
}

}  // namespace formpipe::grammar
