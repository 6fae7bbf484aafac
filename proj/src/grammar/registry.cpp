#include "formpipe/grammar/registry.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "formpipe/grammar/values.hpp"

namespace formpipe::grammar {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string rtrim(const std::string& s) {
  size_t b = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(0, b + 1);
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

FieldKind parse_kind(const std::string& k, const std::string& where) {
  if (k == "categorical") return FieldKind::Categorical;
  if (k == "date") return FieldKind::Date;
  if (k == "time") return FieldKind::Time;
  if (k == "number") return FieldKind::Number;
  if (k == "person") return FieldKind::PersonName;
  if (k == "freetext") return FieldKind::FreeText;
  if (k == "checkbox") return FieldKind::CheckboxAnchor;
  throw GrammarError(GrammarErrorCode::BadGrammarFile, where + ": unknown field kind '" + k + "'");
}

struct RawEntry {
  LinePattern line;           // used unless this is a subform splice
  bool is_subform = false;
  std::string subform_id;
  int subform_page_offset = 0;
  int subform_row_offset = 0;
};

}  // namespace

FormGrammar Registry::parse_grammar_text(const std::string& text, const std::string& origin,
                                         const std::vector<FormGrammar>& resolved) {
  std::istringstream in(text);
  std::string raw_line;
  std::string form_id, title;
  bool subform_only = false, allow_blank_lines = false;
  std::vector<FieldSpec> fields;
  std::vector<RawEntry> entries;
  enum class Section { Head, Fields, Lines } section = Section::Head;
  int lineno = 0;

  auto where = [&]() { return origin + ":" + std::to_string(lineno); };

  while (std::getline(in, raw_line)) {
    ++lineno;
    std::string line = rtrim(raw_line);
    if (line.empty() || line[0] == '#') continue;

    std::string t = trim(line);
    if (t == "[fields]") { section = Section::Fields; continue; }
    if (t == "[lines]") { section = Section::Lines; continue; }

    if (section == Section::Head) {
      if (starts_with(t, "form ")) form_id = trim(t.substr(5));
      else if (starts_with(t, "title ")) title = trim(t.substr(6));
      else if (t == "option subform") subform_only = true;
      else if (t == "option allow-blank-lines") allow_blank_lines = true;
      else
        throw GrammarError(GrammarErrorCode::BadGrammarFile, where() + ": unexpected '" + t + "'");
      continue;
    }

    if (section == Section::Fields) {
      bool continuation = raw_line[0] == ' ' || raw_line[0] == '\t';
      if (continuation) {
        if (fields.empty())
          throw GrammarError(GrammarErrorCode::BadGrammarFile, where() + ": stray continuation");
        FieldSpec& f = fields.back();
        if (starts_with(t, "canon ")) {
          std::istringstream cs(t.substr(6));
          std::string canonical, variant;
          cs >> canonical;
          f.canon.emplace_back(canonical, canonical);  // identity keeps it idempotent
          while (cs >> variant) f.canon.emplace_back(variant, canonical);
        } else if (starts_with(t, "anchor ")) {
          if (std::sscanf(t.c_str() + 7, "%d,%d,%d", &f.anchor_page, &f.anchor_row,
                          &f.anchor_col) != 3)
            throw GrammarError(GrammarErrorCode::BadGrammarFile,
                               where() + ": anchor wants page,row,col");
          f.has_anchor = true;
        } else {
          throw GrammarError(GrammarErrorCode::BadGrammarFile, where() + ": unknown '" + t + "'");
        }
        continue;
      }
      std::istringstream fs(t);
      FieldSpec f;
      std::string kind;
      fs >> f.name >> kind;
      if (f.name.empty() || kind.empty())
        throw GrammarError(GrammarErrorCode::BadGrammarFile, where() + ": field wants name+kind");
      f.kind = parse_kind(kind, where());
      std::string rest;
      std::getline(fs, rest);
      rest = trim(rest);
      if (starts_with(rest, "anchor=")) {
        if (std::sscanf(rest.c_str() + 7, "%d,%d,%d", &f.anchor_page, &f.anchor_row,
                        &f.anchor_col) != 3)
          throw GrammarError(GrammarErrorCode::BadGrammarFile,
                             where() + ": anchor wants page,row,col");
        f.has_anchor = true;
      } else if (!rest.empty()) {
        f.pattern = rest;
      }
      fields.push_back(std::move(f));
      continue;
    }

    // [lines]
    RawEntry e;
    if (t == "blank") {
      e.line.kind = LineKind::Blank;
    } else if (starts_with(t, "subform ")) {
      e.is_subform = true;
      std::istringstream ss(t.substr(8));
      ss >> e.subform_id;
      std::string opt;
      while (ss >> opt) {
        if (starts_with(opt, "offset=")) {
          if (std::sscanf(opt.c_str() + 7, "%d,%d", &e.subform_page_offset,
                          &e.subform_row_offset) != 2)
            throw GrammarError(GrammarErrorCode::BadGrammarFile,
                               where() + ": offset wants page,rows");
        } else {
          throw GrammarError(GrammarErrorCode::BadGrammarFile,
                             where() + ": unknown subform option '" + opt + "'");
        }
      }
    } else if (starts_with(t, "repeat ")) {
      std::string rest = t.substr(7);
      size_t colon = rest.find(':');
      if (colon == std::string::npos)
        throw GrammarError(GrammarErrorCode::BadGrammarFile, where() + ": repeat NAME: pattern");
      e.line.kind = LineKind::Repeat;
      e.line.table = trim(rest.substr(0, colon));
      e.line.source = trim(rest.substr(colon + 1));
    } else if (starts_with(t, "optional ")) {
      e.line.kind = LineKind::Optional;
      e.line.source = trim(t.substr(9));
    } else if (starts_with(t, "exact ")) {
      e.line.kind = LineKind::Once;
      e.line.exact = true;
      e.line.source = line.substr(line.find("exact ") + 6);  // keep columns verbatim
    } else if (starts_with(t, "literal ")) {
      e.line.kind = LineKind::Once;
      e.line.source = trim(t.substr(8));
    } else {
      e.line.kind = LineKind::Once;
      e.line.source = t;
    }
    entries.push_back(std::move(e));
  }

  if (form_id.empty())
    throw GrammarError(GrammarErrorCode::BadGrammarFile, origin + ": missing 'form' header");
  if (title.empty())
    throw GrammarError(GrammarErrorCode::BadGrammarFile, origin + ": missing 'title' header");

  // Splice subforms: their lines and fields fold into this grammar, with
  // checkbox anchors shifted by the declared offset.
  std::vector<LinePattern> lines;
  std::vector<std::string> subform_ids;
  for (RawEntry& e : entries) {
    if (!e.is_subform) {
      lines.push_back(std::move(e.line));
      continue;
    }
    const FormGrammar* sub = nullptr;
    for (const FormGrammar& g : resolved)
      if (g.form_id == e.subform_id) sub = &g;
    if (!sub)
      throw GrammarError(GrammarErrorCode::UnknownSubform,
                         origin + ": subform '" + e.subform_id + "' not loaded yet");
    subform_ids.push_back(sub->form_id);
    for (const LinePattern& lp : sub->lines) {
      LinePattern copy = lp;
      copy.compiled = boost::regex();  // recompiled by compose_grammar
      if (copy.subform.empty()) copy.subform = sub->form_id;
      lines.push_back(std::move(copy));
    }
    for (const FieldSpec& f : sub->fields) {
      FieldSpec copy = f;
      if (copy.subform.empty()) copy.subform = sub->form_id;
      if (copy.has_anchor) {
        copy.anchor_page += e.subform_page_offset;
        copy.anchor_row += e.subform_row_offset;
      }
      fields.push_back(std::move(copy));
    }
  }

  FormGrammar g = compose_grammar(form_id, title, std::move(lines), std::move(fields),
                                  subform_only, allow_blank_lines);
  g.subform_ids = std::move(subform_ids);
  return g;
}

Registry Registry::load_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::path index = dir / "registry.txt";
  std::ifstream in(index);
  if (!in)
    throw GrammarError(GrammarErrorCode::BadGrammarFile,
                       "cannot open registry index " + index.string());

  // registry.txt order is identification priority. Subforms must appear
  // after their own definition files are loadable; we resolve in two passes:
  // files are loaded top to bottom, later files may splice earlier ones, so
  // the index lists subform definitions before the forms that use them when
  // needed. To keep identification order independent from load order, each
  // index line is "filename [late]"-free: we simply load bottom-up for
  // resolution and keep the listed order for identification.
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = line;
    size_t a = t.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = t.find_last_not_of(" \t\r");
    t = t.substr(a, b - a + 1);
    if (t.empty() || t[0] == '#') continue;
    names.push_back(t);
  }
  if (names.empty())
    throw GrammarError(GrammarErrorCode::BadGrammarFile, index.string() + " lists no grammars");

  // Load in reverse index order so subforms (listed last) resolve first;
  // report in index order.
  std::vector<FormGrammar> resolved;
  for (auto it = names.rbegin(); it != names.rend(); ++it) {
    fs::path file = dir / *it;
    std::ifstream gf(file);
    if (!gf)
      throw GrammarError(GrammarErrorCode::BadGrammarFile, "cannot open " + file.string());
    std::stringstream buf;
    buf << gf.rdbuf();
    resolved.push_back(parse_grammar_text(buf.str(), file.filename().string(), resolved));
  }

  Registry reg;
  for (auto it = resolved.rbegin(); it != resolved.rend(); ++it) reg.grammars_.push_back(*it);
  return reg;
}

const FormGrammar* Registry::find(const std::string& form_id) const {
  for (const FormGrammar& g : grammars_)
    if (g.form_id == form_id) return &g;
  return nullptr;
}

std::string Registry::identify(const std::vector<std::string>& lines) const {
  if (grammars_.empty())
    throw GrammarError(GrammarErrorCode::ContractViolation, "identify_form: empty registry");
  std::vector<const std::string*> head;
  for (const std::string& l : lines) {
    if (l.find_first_not_of(" \t") == std::string::npos) continue;
    head.push_back(&l);
    if (head.size() == 5) break;
  }
  for (const FormGrammar& g : grammars_) {
    if (g.subform_only) continue;
    for (const std::string* l : head)
      if (boost::regex_search(*l, g.title_pattern)) return g.form_id;
  }
  return "";
}

}  // namespace formpipe::grammar
