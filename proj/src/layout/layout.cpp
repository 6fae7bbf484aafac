#include "formpipe/layout/layout.hpp"

#include <algorithm>
#include <cmath>

namespace formpipe::layout {

namespace {

// 2D affine matrix [a b c d e f] as used by Tm/cm.
struct Mat {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  static Mat translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }

  Mat mul(const Mat& m) const {  // this * m (apply this, then m)
    return {a * m.a + b * m.c,         a * m.b + b * m.d,
            c * m.a + d * m.c,         c * m.b + d * m.d,
            e * m.a + f * m.c + m.e,   e * m.b + f * m.d + m.f};
  }
  bool upright() const { return b == 0.0 && c == 0.0 && a > 0 && d > 0; }
};

constexpr double kMonoAdvance = 0.6;  // em fraction per glyph, Courier metrics

}  // namespace

std::vector<TextRun> text_runs_from_ops(const std::vector<pdf::Operator>& ops) {
  std::vector<TextRun> runs;

  Mat ctm;  // graphics state CTM, updated by cm inside q/Q
  std::vector<Mat> ctm_stack;
  Mat tm, tlm;  // text matrix and text line matrix
  double font_size = 12.0;
  double leading = 0.0;
  bool in_text = false;

  auto num = [](const pdf::PdfValue& v) { return v.number_or(0.0); };

  auto show = [&](const std::string& text) {
    if (text.empty()) return;
    Mat trm = tm.mul(ctm);
    if (!trm.upright())
      throw PageSkipError({PageSkip::Reason::UnsupportedTextTransform,
                           "rotated or skewed text matrix"});
    double size = font_size * trm.d;
    TextRun run{text, trm.e, trm.f, size};
    runs.push_back(std::move(run));
    // Advance the text matrix by the run's width (fixed-pitch assumption).
    double w = kMonoAdvance * font_size * double(text.size());
    tm = Mat::translate(w, 0).mul(tm);
  };

  for (const pdf::Operator& op : ops) {
    const auto& a = op.operands;
    if (op.name == "q") {
      ctm_stack.push_back(ctm);
    } else if (op.name == "Q") {
      if (!ctm_stack.empty()) {
        ctm = ctm_stack.back();
        ctm_stack.pop_back();
      }
    } else if (op.name == "cm" && a.size() == 6) {
      Mat m{num(a[0]), num(a[1]), num(a[2]), num(a[3]), num(a[4]), num(a[5])};
      ctm = m.mul(ctm);
    } else if (op.name == "BT") {
      in_text = true;
      tm = Mat{};
      tlm = Mat{};
    } else if (op.name == "ET") {
      in_text = false;
    } else if (op.name == "Tf" && a.size() == 2) {
      font_size = num(a[1]);
    } else if (op.name == "TL" && a.size() == 1) {
      leading = num(a[0]);
    } else if (op.name == "Td" && a.size() == 2) {
      tlm = Mat::translate(num(a[0]), num(a[1])).mul(tlm);
      tm = tlm;
    } else if (op.name == "TD" && a.size() == 2) {
      leading = -num(a[1]);
      tlm = Mat::translate(num(a[0]), num(a[1])).mul(tlm);
      tm = tlm;
    } else if (op.name == "Tm" && a.size() == 6) {
      tlm = Mat{num(a[0]), num(a[1]), num(a[2]), num(a[3]), num(a[4]), num(a[5])};
      tm = tlm;
    } else if (op.name == "T*") {
      tlm = Mat::translate(0, -leading).mul(tlm);
      tm = tlm;
    } else if (op.name == "Tj" && a.size() == 1 && a[0].str()) {
      if (in_text) show(*a[0].str());
    } else if (op.name == "'" && a.size() == 1 && a[0].str()) {
      tlm = Mat::translate(0, -leading).mul(tlm);
      tm = tlm;
      if (in_text) show(*a[0].str());
    } else if (op.name == "\"" && a.size() == 3 && a[2].str()) {
      tlm = Mat::translate(0, -leading).mul(tlm);
      tm = tlm;
      if (in_text) show(*a[2].str());
    } else if (op.name == "TJ" && a.size() == 1 && a[0].is_array()) {
      // One run per showing operator: strings concatenate, numeric kerning
      // adjusts the pen between elements.
      if (!in_text) continue;
      std::string text;
      double start_x = 0, start_y = 0, size = 0;
      bool started = false;
      for (const pdf::PdfValue& el : *a[0].array()) {
        if (el.str()) {
          if (!started) {
            Mat trm = tm.mul(ctm);
            if (!trm.upright())
              throw PageSkipError({PageSkip::Reason::UnsupportedTextTransform,
                                   "rotated or skewed text matrix"});
            start_x = trm.e;
            start_y = trm.f;
            size = font_size * trm.d;
            started = true;
          }
          text += *el.str();
          double w = kMonoAdvance * font_size * double(el.str()->size());
          tm = Mat::translate(w, 0).mul(tm);
        } else if (el.is_number()) {
          double w = -el.number_or(0) / 1000.0 * font_size;
          tm = Mat::translate(w, 0).mul(tm);
        }
      }
      if (started && !text.empty()) runs.push_back({text, start_x, start_y, size});
    }
  }
  return runs;
}

std::vector<TextRun> extract_text_runs(const pdf::PageRef& page, const pdf::DocumentGraph& graph) {
  pdf::Bytes content;
  for (const pdf::Stream* s : graph.page_content_streams(page)) {
    try {
      content += pdf::decode_stream(*s);
      content += '\n';
    } catch (const pdf::PdfError& e) {
      if (e.code() == pdf::ErrorCode::UnsupportedFilter)
        throw PageSkipError({PageSkip::Reason::PageIsImageBased, e.what()});
      throw;
    }
  }
  return text_runs_from_ops(pdf::tokenize_content(content));
}

namespace {
// Round half away from zero, so grid placement is deterministic.
int round_away(double v) { return int(v < 0 ? std::ceil(v - 0.5) : std::floor(v + 0.5)); }
}  // namespace

LayoutGrid compose_layout(const std::vector<TextRun>& runs, double page_height,
                          double col_pitch, double row_pitch) {
  LayoutGrid grid;
  grid.col_pitch = col_pitch;
  grid.row_pitch = row_pitch;
  if (runs.empty()) return grid;

  int max_row = 0, max_col = 0;
  struct Placed {
    int row, col;
    const std::string* text;
  };
  std::vector<Placed> placed;
  placed.reserve(runs.size());
  for (const TextRun& run : runs) {
    int row = round_away((page_height - run.y) / row_pitch);
    int col = round_away(run.x / col_pitch);
    if (row < 0) row = 0;
    if (col < 0) col = 0;
    placed.push_back({row, col, &run.text});
    max_row = std::max(max_row, row);
    max_col = std::max(max_col, col + int(run.text.size()) - 1);
  }
  grid.cells.assign(size_t(max_row) + 1, std::string(size_t(max_col) + 1, ' '));
  for (const Placed& p : placed) {
    for (size_t i = 0; i < p.text->size(); ++i) {
      char& cell = grid.cells[p.row][p.col + i];
      char ch = (*p.text)[i];
      if (cell != ' ' && ch != ' ' && cell != ch)
        grid.collisions.push_back({p.row, int(p.col + i), cell, ch});
      if (ch != ' ') cell = ch;  // last writer wins
    }
  }
  return grid;
}

std::vector<std::string> render_lines(const LayoutGrid& grid) {
  std::vector<std::string> lines;
  lines.reserve(grid.cells.size());
  for (const std::string& row : grid.cells) {
    size_t end = row.find_last_not_of(' ');
    lines.push_back(end == std::string::npos ? std::string() : row.substr(0, end + 1));
  }
  return lines;
}

namespace {
const pdf::PdfValue* find_inherited(const pdf::PageRef& page, const pdf::DocumentGraph& graph,
                                    const std::string& key) {
  if (const pdf::PdfValue* v = page.dict.find(key)) return v;
  // Inheritable attributes live on ancestors; walk /Parent chain.
  const pdf::PdfValue* parent = page.dict.find("Parent");
  int hops = 0;
  while (parent && hops++ < 32) {
    const pdf::PdfValue& pv = graph.resolve(*parent);
    if (!pv.is_dict()) break;
    if (const pdf::PdfValue* v = pv.dict()->find(key)) return v;
    parent = pv.dict()->find("Parent");
  }
  return nullptr;
}

double media_box_dim(const pdf::PageRef& page, const pdf::DocumentGraph& graph, int lo, int hi,
                     double dflt) {
  const pdf::PdfValue* mb = find_inherited(page, graph, "MediaBox");
  if (!mb) return dflt;
  const pdf::PdfValue& v = graph.resolve(*mb);
  if (!v.is_array() || v.array()->size() < 4) return dflt;
  const auto& a = *v.array();
  return a[hi].number_or(dflt) - a[lo].number_or(0);
}
}  // namespace

double page_height(const pdf::PageRef& page, const pdf::DocumentGraph& graph) {
  return media_box_dim(page, graph, 1, 3, 792.0);
}

double page_width(const pdf::PageRef& page, const pdf::DocumentGraph& graph) {
  return media_box_dim(page, graph, 0, 2, 612.0);
}

}  // namespace formpipe::layout
