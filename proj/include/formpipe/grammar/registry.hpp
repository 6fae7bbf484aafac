#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "formpipe/grammar/grammar.hpp"

namespace formpipe::grammar {

// Immutable grammar registry. Grammars load from a directory of declarative
// .grammar files listed (in identification priority order) by registry.txt;
// see docs/grammar-format.md for the file syntax. `subform` grammars are
// spliced into their parents and never win identification on their own.
class Registry {
public:
  static Registry load_dir(const std::filesystem::path& dir);

  // Parses one grammar file's text (exposed for tests and tooling).
  // Subform references are resolved against `resolved`.
  static FormGrammar parse_grammar_text(const std::string& text, const std::string& origin,
                                        const std::vector<FormGrammar>& resolved);

  const std::vector<FormGrammar>& grammars() const { return grammars_; }
  const FormGrammar* find(const std::string& form_id) const;

  // First registered grammar whose title pattern hits within the first five
  // non-blank lines; empty string = Unknown.
  std::string identify(const std::vector<std::string>& lines) const;

private:
  std::vector<FormGrammar> grammars_;
};

}  // namespace formpipe::grammar
