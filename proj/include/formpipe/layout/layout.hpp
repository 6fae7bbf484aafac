#pragma once

#include <string>
#include <vector>

#include "formpipe/pdf/content.hpp"
#include "formpipe/pdf/document.hpp"

namespace formpipe::layout {

// A positioned piece of text: one run per text-showing operator.
struct TextRun {
  std::string text;
  double x = 0;          // device points, left edge of first glyph
  double y = 0;          // device points, baseline (PDF origin: bottom-left)
  double font_size = 0;  // points
};

struct CellCollision {
  int row = 0;
  int col = 0;
  char previous = ' ';
  char incoming = ' ';
};

// Fixed-pitch 2D character grid approximating the page. Spaces are empty
// cells; collisions are reported and the last writer wins.
struct LayoutGrid {
  std::vector<std::string> cells;  // rows of equal length
  double row_pitch = 12.0;
  double col_pitch = 6.0;
  std::vector<CellCollision> collisions;

  int rows() const { return int(cells.size()); }
  int cols() const { return cells.empty() ? 0 : int(cells[0].size()); }
};

// Raised when a page's text cannot be mapped to the upright grid model
// (rotated/skewed text) or its content is not decodable (image-based).
struct PageSkip {
  enum class Reason { PageIsImageBased, UnsupportedTextTransform };
  Reason reason;
  std::string detail;
};

class PageSkipError : public std::runtime_error {
public:
  explicit PageSkipError(PageSkip s)
      : std::runtime_error(s.reason == PageSkip::Reason::PageIsImageBased
                               ? "PageIsImageBased: " + s.detail
                               : "UnsupportedTextTransform: " + s.detail),
        skip_(std::move(s)) {}
  const PageSkip& skip() const { return skip_; }

private:
  PageSkip skip_;
};

// Interprets the Text-class operators of a tokenized content stream.
// Positions come from the accumulated text matrix; glyph advance assumes
// fixed-pitch metrics (0.6 em), which holds for the target forms.
std::vector<TextRun> text_runs_from_ops(const std::vector<pdf::Operator>& ops);

// Convenience wrapper: decode + tokenize + extract for one page.
std::vector<TextRun> extract_text_runs(const pdf::PageRef& page, const pdf::DocumentGraph& graph);

// row = round((page_height - y)/row_pitch), col = round(x/col_pitch),
// rounding half away from zero. Top of page is row 0.
LayoutGrid compose_layout(const std::vector<TextRun>& runs, double page_height,
                          double col_pitch = 6.0, double row_pitch = 12.0);

// One string per grid row, right-trimmed; interior spacing preserved.
std::vector<std::string> render_lines(const LayoutGrid& grid);

// Page height in points from /MediaBox (inherited default US Letter).
double page_height(const pdf::PageRef& page, const pdf::DocumentGraph& graph);
double page_width(const pdf::PageRef& page, const pdf::DocumentGraph& graph);

}  // namespace formpipe::layout
