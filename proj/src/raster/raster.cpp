#include "formpipe/raster/raster.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace formpipe::raster {

size_t BinaryImage::count() const {
  size_t n = 0;
  for (uint8_t v : foreground) n += v;
  return n;
}

namespace {

// Device-space polygon edge, y-down pixel coordinates.
struct Edge {
  double x0, y0, x1, y1;  // y0 < y1 always; dir carries original orientation
  int dir;                // +1 downward, -1 upward
};

struct DevicePoly {
  std::vector<Edge> edges;
  double min_y = 1e300, max_y = -1e300;

  void add_edge(double ax, double ay, double bx, double by) {
    if (ay == by) return;  // horizontal edges never cross a scanline center
    Edge e;
    e.dir = by > ay ? 1 : -1;
    if (by > ay) e = {ax, ay, bx, by, 1};
    else e = {bx, by, ax, ay, -1};
    min_y = std::min({min_y, ay, by});
    max_y = std::max({max_y, ay, by});
    edges.push_back(e);
  }
};

// Snapped rectangle fill: exact pixel counts per axis.
struct DeviceRect {
  int x0, y0, x1, y1;  // half-open pixel ranges
};

struct PreparedElement {
  uint8_t lum = 0;
  std::vector<DeviceRect> rects;
  DevicePoly poly;           // polygon soup (fills and stroke quads)
  double min_y = 1e300, max_y = -1e300;
};

int round_half_up(double v) { return int(std::floor(v + 0.5)); }

void flatten_cubic(std::vector<Point>& out, Point p0, Point c1, Point c2, Point p3, double tol,
                   int depth) {
  // Flat enough when control points sit within tol of the chord.
  double dx = p3.x - p0.x, dy = p3.y - p0.y;
  double d1 = std::abs((c1.x - p3.x) * dy - (c1.y - p3.y) * dx);
  double d2 = std::abs((c2.x - p3.x) * dy - (c2.y - p3.y) * dx);
  double dd = d1 + d2;
  if (depth >= 16 || dd * dd <= tol * tol * (dx * dx + dy * dy)) {
    out.push_back(p3);
    return;
  }
  auto mid = [](Point a, Point b) { return Point{(a.x + b.x) / 2, (a.y + b.y) / 2}; };
  Point p01 = mid(p0, c1), p12 = mid(c1, c2), p23 = mid(c2, p3);
  Point p012 = mid(p01, p12), p123 = mid(p12, p23);
  Point m = mid(p012, p123);
  flatten_cubic(out, p0, p01, p012, m, tol, depth + 1);
  flatten_cubic(out, m, p123, p23, p3, tol, depth + 1);
}

constexpr double kFlattenTolPx = 0.2;

// Flattens a subpath into device-space polyline points (pixels, y-down).
std::vector<Point> flatten_subpath(const SubPath& sp, double scale, double page_height,
                                   bool& closed) {
  auto dev = [&](Point p) { return Point{p.x * scale, (page_height - p.y) * scale}; };
  std::vector<Point> pts;
  closed = false;
  if (sp.is_rect) {
    pts.push_back(dev({sp.rx, sp.ry}));
    pts.push_back(dev({sp.rx + sp.rw, sp.ry}));
    pts.push_back(dev({sp.rx + sp.rw, sp.ry + sp.rh}));
    pts.push_back(dev({sp.rx, sp.ry + sp.rh}));
    closed = true;
    return pts;
  }
  Point cur{};
  for (const Segment& s : sp.segs) {
    switch (s.kind) {
      case Segment::Kind::Move:
        cur = dev(s.p);
        pts.push_back(cur);
        break;
      case Segment::Kind::Line:
        cur = dev(s.p);
        pts.push_back(cur);
        break;
      case Segment::Kind::Cubic: {
        std::vector<Point> flat;
        flatten_cubic(flat, cur, dev(s.c1), dev(s.c2), dev(s.p3), kFlattenTolPx, 0);
        for (Point p : flat) pts.push_back(p);
        cur = dev(s.p3);
        break;
      }
      case Segment::Kind::Close:
        closed = true;
        break;
    }
  }
  return pts;
}

void add_polygon(DevicePoly& poly, const std::vector<Point>& pts) {
  if (pts.size() < 2) return;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    poly.add_edge(pts[i].x, pts[i].y, pts[i + 1].x, pts[i + 1].y);
  poly.add_edge(pts.back().x, pts.back().y, pts[0].x, pts[0].y);
}

// Stroke segment as a quad with square caps: extending by half-width keeps
// rectangle outlines gap-free at corners.
void add_stroke_quad(DevicePoly& poly, Point a, Point b, double half_w) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double len = std::hypot(dx, dy);
  if (len == 0) {
    dx = 1;
    dy = 0;
    len = 1;
  }
  dx /= len;
  dy /= len;
  Point a2{a.x - dx * half_w, a.y - dy * half_w};
  Point b2{b.x + dx * half_w, b.y + dy * half_w};
  double nx = -dy * half_w, ny = dx * half_w;
  std::vector<Point> quad = {{a2.x + nx, a2.y + ny},
                             {b2.x + nx, b2.y + ny},
                             {b2.x - nx, b2.y - ny},
                             {a2.x - nx, a2.y - ny}};
  add_polygon(poly, quad);
}

std::vector<PreparedElement> prepare(const GraphicsScene& scene, int dpi) {
  double scale = double(dpi) / 72.0;
  std::vector<PreparedElement> prepared;
  prepared.reserve(scene.elements.size());

  for (const Element& el : scene.elements) {
    PreparedElement pe;
    double lum = std::round(255.0 * std::min(1.0, std::max(0.0, el.gray)));
    pe.lum = uint8_t(lum);

    if (el.paint == Paint::Fill) {
      for (const SubPath& sp : el.subpaths) {
        if (sp.is_rect && el.subpaths.size() == 1) {
          // Exact-area rule for lone rectangles.
          DeviceRect r;
          r.x0 = round_half_up(sp.rx * scale);
          r.x1 = r.x0 + round_half_up(sp.rw * scale);
          double top = (scene.page_height - (sp.ry + sp.rh)) * scale;
          r.y0 = round_half_up(top);
          r.y1 = r.y0 + round_half_up(sp.rh * scale);
          pe.rects.push_back(r);
          pe.min_y = std::min(pe.min_y, double(r.y0));
          pe.max_y = std::max(pe.max_y, double(r.y1));
        } else {
          bool closed;
          std::vector<Point> pts = flatten_subpath(sp, scale, scene.page_height, closed);
          add_polygon(pe.poly, pts);
        }
      }
    } else {
      double half_w = std::max(el.line_width * scale, 1.0) / 2.0;
      for (const SubPath& sp : el.subpaths) {
        bool closed;
        std::vector<Point> pts = flatten_subpath(sp, scale, scene.page_height, closed);
        if (pts.size() < 2) continue;
        for (size_t i = 0; i + 1 < pts.size(); ++i)
          add_stroke_quad(pe.poly, pts[i], pts[i + 1], half_w);
        if (closed) add_stroke_quad(pe.poly, pts.back(), pts[0], half_w);
      }
    }
    if (!pe.poly.edges.empty()) {
      pe.min_y = std::min(pe.min_y, pe.poly.min_y);
      pe.max_y = std::max(pe.max_y, pe.poly.max_y);
    }
    prepared.push_back(std::move(pe));
  }
  return prepared;
}

// Paints one scanline of one element into the row. Shared verbatim by the
// parallel and serial drivers so their output is identical by construction.
void paint_scanline(const PreparedElement& pe, int y, int width, uint8_t* row,
                    std::vector<std::pair<double, int>>& scratch) {
  double yc = y + 0.5;

  for (const DeviceRect& r : pe.rects) {
    if (y < r.y0 || y >= r.y1) continue;
    int x0 = std::max(r.x0, 0), x1 = std::min(r.x1, width);
    for (int x = x0; x < x1; ++x) row[x] = std::min(row[x], pe.lum);
  }

  if (pe.poly.edges.empty() || yc < pe.poly.min_y || yc > pe.poly.max_y) return;
  scratch.clear();
  for (const Edge& e : pe.poly.edges) {
    if (yc < e.y0 || yc >= e.y1) continue;  // half-open: [y0, y1)
    double x = e.x0 + (yc - e.y0) * (e.x1 - e.x0) / (e.y1 - e.y0);
    scratch.emplace_back(x, e.dir);
  }
  if (scratch.empty()) return;
  std::sort(scratch.begin(), scratch.end());
  int winding = 0;
  for (size_t i = 0; i + 1 <= scratch.size(); ++i) {
    winding += scratch[i].second;
    if (winding == 0 || i + 1 == scratch.size()) continue;
    double xa = scratch[i].first, xb = scratch[i + 1].first;
    // Pixel center rule: xa <= x+0.5 < xb.
    int px0 = std::max(int(std::ceil(xa - 0.5)), 0);
    int px1 = std::min(int(std::ceil(xb - 0.5)), width);
    for (int x = px0; x < px1; ++x) row[x] = std::min(row[x], pe.lum);
  }
}

RasterBitmap make_bitmap(const GraphicsScene& scene, int dpi) {
  RasterBitmap bm;
  bm.dpi = dpi;
  bm.width = int(std::ceil(scene.page_width * dpi / 72.0));
  bm.height = int(std::ceil(scene.page_height * dpi / 72.0));
  bm.luminance.assign(size_t(bm.width) * bm.height, 255);
  return bm;
}

}  // namespace

RasterBitmap rasterize(const GraphicsScene& scene, int dpi, int n_threads) {
  RasterBitmap bm = make_bitmap(scene, dpi);
  std::vector<PreparedElement> prepared = prepare(scene, dpi);
  if (prepared.empty()) return bm;

  int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<std::pair<double, int>> scratch;
#pragma omp for schedule(static)
    for (int y = 0; y < bm.height; ++y) {
      uint8_t* row = bm.luminance.data() + size_t(y) * bm.width;
      for (const PreparedElement& pe : prepared) {
        if (y + 1 < pe.min_y || y > pe.max_y + 1) continue;
        paint_scanline(pe, y, bm.width, row, scratch);
      }
    }
  }
  return bm;
}

RasterBitmap rasterize_serial(const GraphicsScene& scene, int dpi) {
  RasterBitmap bm = make_bitmap(scene, dpi);
  std::vector<PreparedElement> prepared = prepare(scene, dpi);
  std::vector<std::pair<double, int>> scratch;
  for (const PreparedElement& pe : prepared) {
    int y_lo = std::max(int(std::floor(pe.min_y)) - 1, 0);
    int y_hi = std::min(int(std::ceil(pe.max_y)) + 1, bm.height);
    for (int y = y_lo; y < y_hi; ++y)
      paint_scanline(pe, y, bm.width, bm.luminance.data() + size_t(y) * bm.width, scratch);
  }
  return bm;
}

BinaryImage binarize(const RasterBitmap& bitmap, int ink_threshold, int n_threads) {
  BinaryImage img;
  img.width = bitmap.width;
  img.height = bitmap.height;
  img.foreground.resize(bitmap.luminance.size());
  uint8_t t = uint8_t(std::min(std::max(ink_threshold, 0), 255));
  const uint8_t* src = bitmap.luminance.data();
  uint8_t* dst = img.foreground.data();
  long long n = (long long)bitmap.luminance.size();
  int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long long i = 0; i < n; ++i) dst[i] = src[i] <= t ? 1 : 0;
  return img;
}

BinaryImage binarize_serial(const RasterBitmap& bitmap, int ink_threshold) {
  BinaryImage img;
  img.width = bitmap.width;
  img.height = bitmap.height;
  img.foreground.resize(bitmap.luminance.size());
  uint8_t t = uint8_t(std::min(std::max(ink_threshold, 0), 255));
  for (size_t i = 0; i < bitmap.luminance.size(); ++i)
    img.foreground[i] = bitmap.luminance[i] <= t ? 1 : 0;
  return img;
}

std::string to_pgm(const RasterBitmap& bitmap) {
  std::string out = "P5\n" + std::to_string(bitmap.width) + " " + std::to_string(bitmap.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(bitmap.luminance.data()), bitmap.luminance.size());
  return out;
}

std::string to_pbm(const BinaryImage& image) {
  std::string out = "P4\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n";
  int stride = (image.width + 7) / 8;
  std::string bits(size_t(stride) * image.height, '\0');
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      if (image.at(x, y)) bits[size_t(y) * stride + x / 8] |= char(0x80 >> (x % 8));
  out += bits;
  return out;
}

}  // namespace formpipe::raster
