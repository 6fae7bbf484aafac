#pragma once

#include <string>
#include <vector>

#include "formpipe/pdf/content.hpp"

namespace formpipe::raster {

struct Point {
  double x = 0, y = 0;
};

// One path segment in page space (points, y-up).
struct Segment {
  enum class Kind { Move, Line, Cubic, Close };
  Kind kind = Kind::Move;
  Point p;          // Move/Line target
  Point c1, c2, p3; // Cubic controls and target
};

// A subpath: either a run of segments or an axis-aligned rectangle from `re`.
// Rectangles are kept intact so fills of them can be rendered with the exact
// pixel-count rule.
struct SubPath {
  bool is_rect = false;
  double rx = 0, ry = 0, rw = 0, rh = 0;  // rect form
  std::vector<Segment> segs;              // general form
};

enum class Paint { Stroke, Fill };

struct Element {
  std::vector<SubPath> subpaths;
  Paint paint = Paint::Fill;
  double gray = 0.0;  // 0 = black, 1 = white
  double line_width = 1.0;
};

struct GraphicsScene {
  std::vector<Element> elements;
  double page_width = 612;
  double page_height = 792;
  std::vector<std::string> warnings;  // e.g. paint with no current path
};

// Drops Text-class operators; Graphics and State survive in order so that
// gray/width state still applies to the paints that follow.
std::vector<pdf::Operator> strip_text_operators(const std::vector<pdf::Operator>& ops);

// Interprets path construction and painting operators into a scene.
// Pre: ops carry no Text-class operators.
GraphicsScene build_scene(const std::vector<pdf::Operator>& ops, double page_width,
                          double page_height);

}  // namespace formpipe::raster
