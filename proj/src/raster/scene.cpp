#include "formpipe/raster/scene.hpp"

#include <algorithm>
#include <cmath>

namespace formpipe::raster {

std::vector<pdf::Operator> strip_text_operators(const std::vector<pdf::Operator>& ops) {
  std::vector<pdf::Operator> out;
  out.reserve(ops.size());
  for (const pdf::Operator& op : ops)
    if (op.cls != pdf::OpClass::Text) out.push_back(op);
  return out;
}

namespace {

struct Mat {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;
  Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
  Mat mul(const Mat& m) const {
    return {a * m.a + b * m.c,       a * m.b + b * m.d,
            c * m.a + d * m.c,       c * m.b + d * m.d,
            e * m.a + f * m.c + m.e, e * m.b + f * m.d + m.f};
  }
  bool axis_aligned() const { return b == 0.0 && c == 0.0; }
};

struct GState {
  Mat ctm;
  double fill_gray = 0.0;
  double stroke_gray = 0.0;
  double line_width = 1.0;
};

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double rgb_to_gray(double r, double g, double b) {
  return clamp01(0.299 * r + 0.587 * g + 0.114 * b);
}

}  // namespace

GraphicsScene build_scene(const std::vector<pdf::Operator>& ops, double page_width,
                          double page_height) {
  GraphicsScene scene;
  scene.page_width = page_width;
  scene.page_height = page_height;

  GState gs;
  std::vector<GState> stack;
  std::vector<SubPath> path;
  SubPath cur;
  bool have_point = false;
  Point cur_pt{};

  auto num = [](const pdf::PdfValue& v) { return v.number_or(0.0); };

  auto flush_subpath = [&]() {
    if (!cur.segs.empty() || cur.is_rect) path.push_back(std::move(cur));
    cur = SubPath{};
  };

  auto emit = [&](Paint paint, double gray, bool close_first) {
    flush_subpath();
    if (path.empty()) {
      scene.warnings.push_back("paint operator with no current path ignored");
      return;
    }
    if (close_first) {
      for (SubPath& sp : path)
        if (!sp.is_rect && !sp.segs.empty() && sp.segs.back().kind != Segment::Kind::Close)
          sp.segs.push_back({Segment::Kind::Close, {}, {}, {}, {}});
    }
    Element el;
    el.subpaths = path;
    el.paint = paint;
    el.gray = clamp01(gray);
    // Scale line width by the CTM (uniform component).
    double s = std::sqrt(std::abs(gs.ctm.a * gs.ctm.d - gs.ctm.b * gs.ctm.c));
    el.line_width = std::max(gs.line_width * (s > 0 ? s : 1.0), 1e-6);
    scene.elements.push_back(std::move(el));
  };

  auto end_path = [&]() {
    path.clear();
    cur = SubPath{};
    have_point = false;
  };

  for (const pdf::Operator& op : ops) {
    const auto& a = op.operands;
    const std::string& n = op.name;

    if (n == "q") {
      stack.push_back(gs);
    } else if (n == "Q") {
      if (!stack.empty()) {
        gs = stack.back();
        stack.pop_back();
      }
    } else if (n == "cm" && a.size() == 6) {
      Mat m{num(a[0]), num(a[1]), num(a[2]), num(a[3]), num(a[4]), num(a[5])};
      gs.ctm = m.mul(gs.ctm);
    } else if (n == "g" && a.size() == 1) {
      gs.fill_gray = clamp01(num(a[0]));
    } else if (n == "G" && a.size() == 1) {
      gs.stroke_gray = clamp01(num(a[0]));
    } else if (n == "rg" && a.size() == 3) {
      gs.fill_gray = rgb_to_gray(num(a[0]), num(a[1]), num(a[2]));
    } else if (n == "RG" && a.size() == 3) {
      gs.stroke_gray = rgb_to_gray(num(a[0]), num(a[1]), num(a[2]));
    } else if (n == "k" && a.size() == 4) {
      double k = num(a[3]);
      gs.fill_gray = rgb_to_gray((1 - num(a[0])) * (1 - k), (1 - num(a[1])) * (1 - k),
                                 (1 - num(a[2])) * (1 - k));
    } else if (n == "K" && a.size() == 4) {
      double k = num(a[3]);
      gs.stroke_gray = rgb_to_gray((1 - num(a[0])) * (1 - k), (1 - num(a[1])) * (1 - k),
                                   (1 - num(a[2])) * (1 - k));
    } else if (n == "w" && a.size() == 1) {
      gs.line_width = std::max(num(a[0]), 0.0);
    } else if (n == "m" && a.size() == 2) {
      flush_subpath();
      cur_pt = gs.ctm.apply({num(a[0]), num(a[1])});
      cur.segs.push_back({Segment::Kind::Move, cur_pt, {}, {}, {}});
      have_point = true;
    } else if (n == "l" && a.size() == 2) {
      if (!have_point) continue;
      cur_pt = gs.ctm.apply({num(a[0]), num(a[1])});
      cur.segs.push_back({Segment::Kind::Line, cur_pt, {}, {}, {}});
    } else if (n == "c" && a.size() == 6) {
      if (!have_point) continue;
      Segment s;
      s.kind = Segment::Kind::Cubic;
      s.c1 = gs.ctm.apply({num(a[0]), num(a[1])});
      s.c2 = gs.ctm.apply({num(a[2]), num(a[3])});
      s.p3 = gs.ctm.apply({num(a[4]), num(a[5])});
      cur.segs.push_back(s);
      cur_pt = s.p3;
    } else if (n == "h") {
      if (!cur.segs.empty()) cur.segs.push_back({Segment::Kind::Close, {}, {}, {}, {}});
    } else if (n == "re" && a.size() == 4) {
      flush_subpath();
      double x = num(a[0]), y = num(a[1]), w = num(a[2]), h = num(a[3]);
      if (gs.ctm.axis_aligned()) {
        Point p0 = gs.ctm.apply({x, y});
        Point p1 = gs.ctm.apply({x + w, y + h});
        SubPath sp;
        sp.is_rect = true;
        sp.rx = std::min(p0.x, p1.x);
        sp.ry = std::min(p0.y, p1.y);
        sp.rw = std::abs(p1.x - p0.x);
        sp.rh = std::abs(p1.y - p0.y);
        path.push_back(sp);
      } else {
        SubPath sp;
        sp.segs.push_back({Segment::Kind::Move, gs.ctm.apply({x, y}), {}, {}, {}});
        sp.segs.push_back({Segment::Kind::Line, gs.ctm.apply({x + w, y}), {}, {}, {}});
        sp.segs.push_back({Segment::Kind::Line, gs.ctm.apply({x + w, y + h}), {}, {}, {}});
        sp.segs.push_back({Segment::Kind::Line, gs.ctm.apply({x, y + h}), {}, {}, {}});
        sp.segs.push_back({Segment::Kind::Close, {}, {}, {}, {}});
        path.push_back(sp);
      }
      cur_pt = gs.ctm.apply({x, y});
      have_point = true;
    } else if (n == "S") {
      emit(Paint::Stroke, gs.stroke_gray, false);
      end_path();
    } else if (n == "s") {
      emit(Paint::Stroke, gs.stroke_gray, true);
      end_path();
    } else if (n == "f" || n == "F" || n == "f*") {
      emit(Paint::Fill, gs.fill_gray, true);
      end_path();
    } else if (n == "B" || n == "B*") {
      emit(Paint::Fill, gs.fill_gray, true);
      emit(Paint::Stroke, gs.stroke_gray, false);
      end_path();
    } else if (n == "b" || n == "b*") {
      emit(Paint::Fill, gs.fill_gray, true);
      emit(Paint::Stroke, gs.stroke_gray, true);
      end_path();
    } else if (n == "n") {
      end_path();
    }
    // All other State operators are irrelevant to geometry.
  }
  return scene;
}

}  // namespace formpipe::raster
