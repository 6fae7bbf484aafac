#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "formpipe/exporters/json.hpp"

namespace formpipe::synth {

// Deterministic RNG with explicit bounded draws (distribution code in the
// standard library is implementation-defined, which would break the
// byte-identical-corpus promise across toolchains).
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t u64() { return eng_(); }
  int range(int lo, int hi) {  // inclusive
    return lo + int(u64() % uint64_t(hi - lo + 1));
  }
  double unit() { return double(u64() >> 11) * (1.0 / 9007199254740992.0); }
  bool chance(double p) { return unit() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[size_t(u64() % v.size())];
  }

private:
  std::mt19937_64 eng_;
};

struct Perturbations {
  bool alt_labels = false;
  bool shifted_columns = false;
  bool extra_blank_lines = false;
  bool gray_rules = false;

  bool any() const { return alt_labels || shifted_columns || extra_blank_lines || gray_rules; }
};

// Everything drawn on one page, grid-aligned: col_pitch 6 pt, row_pitch 12 pt,
// Courier 10 (so one char = one grid cell).
struct PageSpec {
  struct Frag {
    int row = 0;
    int col = 0;
    std::string text;
    bool is_value = false;  // shifted-columns perturbation moves only values
  };
  struct Box {
    int row = 0;
    int col = 0;
    bool checked = false;
    int style = 0;  // 0 = filled interior, 1 = cross strokes
  };
  struct Rule {  // gray-0.5 strokes, page points
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double width = 0.8;
  };
  struct Decor {  // small black fills, deliberately below the checkbox gate
    double x = 0, y = 0, w = 0, h = 0;
  };

  std::vector<Frag> frags;
  std::vector<Box> boxes;
  std::vector<Rule> rules;
  std::vector<Decor> decor;

  // Ground-truth layout text (right-trimmed), as render_lines must see it.
  std::vector<std::string> lines() const;
  // Content-stream text for the PDF writer.
  std::string content() const;
};

struct FormInstance {
  std::string form_id;
  std::vector<PageSpec> pages;
  exporters::ojson truth;  // {form_id, fields, checkboxes, tables}
};

constexpr double kColPitch = 6.0;
constexpr double kRowPitch = 12.0;
constexpr double kPageW = 612.0;
constexpr double kPageH = 792.0;
constexpr double kBoxSidePt = 19.2;  // 80 px at 300 dpi

// The shipped form population. content rng drives values; perturb rng drives
// layout damage so the same content seed regenerates identical truth.
FormInstance make_form(const std::string& form_id, Rng& content, Rng& perturb,
                       const Perturbations& p);
const std::vector<std::string>& form_ids();

// Fixture reproducing the published DCD vitals table (rows 0..20, zeros after
// arrest, NaN tail) with fixed pre-op values.
FormInstance make_paper_dcd_flowsheet();

}  // namespace formpipe::synth
