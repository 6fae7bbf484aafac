#include "doctest.h"

#include "formpipe/pdf/content.hpp"
#include "formpipe/raster/raster.hpp"
#include "formpipe/raster/scene.hpp"
#include "formpipe/synth/forms.hpp"
#include "support.hpp"

using namespace formpipe;

namespace {

raster::GraphicsScene scene_of(const std::string& content, double w = 612, double h = 792) {
  return raster::build_scene(raster::strip_text_operators(pdf::tokenize_content(content)), w, h);
}

long long ink_count(const raster::BinaryImage& img) { return (long long)img.count(); }

}  // namespace

TEST_CASE("strip_text_operators keeps graphics and state in order") {
  auto ops = pdf::tokenize_content("BT (x) Tj ET 0 0 5 5 re f");
  auto kept = raster::strip_text_operators(ops);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].name == "re");
  CHECK(kept[1].name == "f");

  auto all_text = raster::strip_text_operators(pdf::tokenize_content("BT (x) Tj ET"));
  CHECK(all_text.empty());

  auto with_state = raster::strip_text_operators(
      pdf::tokenize_content("0.5 g 0 0 5 5 re f BT (x) Tj ET"));
  REQUIRE(with_state.size() == 3);
  CHECK(with_state[0].name == "g");  // gray state survives
}

TEST_CASE("build_scene interprets rects, strokes and gray state") {
  raster::GraphicsScene s = scene_of("0 0 19.2 19.2 re S");
  REQUIRE(s.elements.size() == 1);
  CHECK(s.elements[0].paint == raster::Paint::Stroke);
  CHECK(s.elements[0].gray == 0.0);
  REQUIRE(s.elements[0].subpaths.size() == 1);
  CHECK(s.elements[0].subpaths[0].is_rect);
  CHECK(s.elements[0].subpaths[0].rw == doctest::Approx(19.2));

  raster::GraphicsScene s2 = scene_of("0.5 g 0 0 100 2 re f");
  REQUIRE(s2.elements.size() == 1);
  CHECK(s2.elements[0].paint == raster::Paint::Fill);
  CHECK(s2.elements[0].gray == doctest::Approx(0.5));

  raster::GraphicsScene s3 = scene_of("");
  CHECK(s3.elements.empty());
}

TEST_CASE("paint with no path warns and is ignored") {
  raster::GraphicsScene s = scene_of("f S");
  CHECK(s.elements.empty());
  CHECK(s.warnings.size() == 2);
}

TEST_CASE("filled 19.2pt square at 300 dpi is an exact 80x80 block") {
  raster::GraphicsScene s = scene_of("100 100 19.2 19.2 re f");
  raster::RasterBitmap bm = raster::rasterize(s, 300);
  CHECK(bm.width == int(std::ceil(612 * 300 / 72.0)));
  CHECK(bm.height == int(std::ceil(792 * 300 / 72.0)));
  raster::BinaryImage bin = raster::binarize(bm, 100);
  CHECK(ink_count(bin) == 80 * 80);
}

TEST_CASE("empty scene rasterizes to all background") {
  raster::GraphicsScene s = scene_of("");
  raster::RasterBitmap bm = raster::rasterize(s, 150);
  for (uint8_t v : bm.luminance) REQUIRE(v == 255);
}

TEST_CASE("1pt stroked square ink count is within 10% of the analytic ring") {
  raster::GraphicsScene s = scene_of("1 w 100 100 19.2 19.2 re S");
  raster::RasterBitmap bm = raster::rasterize(s, 300);
  raster::BinaryImage bin = raster::binarize(bm, 100);
  // Ring of thickness 4 px around an 80 px path: 4*4*(80-4) = 1216.
  long long analytic = 1216;
  CHECK(double(ink_count(bin)) > 0.9 * analytic);
  CHECK(double(ink_count(bin)) < 1.1 * analytic);
}

TEST_CASE("area consistency for random axis-aligned rectangles") {
  synth::Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    double x = 20 + rng.unit() * 400;
    double y = 20 + rng.unit() * 600;
    double w = 1 + rng.unit() * 150;
    double h = 1 + rng.unit() * 150;
    int dpi = std::vector<int>{72, 150, 300}[size_t(rng.range(0, 2))];
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.3f %.3f %.3f %.3f re f", x, y, w, h);
    raster::GraphicsScene s = scene_of(buf);
    raster::BinaryImage bin = raster::binarize(raster::rasterize(s, dpi), 100);
    double scale = dpi / 72.0;
    long long expect =
        (long long)std::floor(w * scale + 0.5) * (long long)std::floor(h * scale + 0.5);
    INFO("rect " << buf << " at " << dpi << " dpi");
    CHECK(ink_count(bin) == expect);
  }
}

TEST_CASE("binarize keeps black and suppresses 50% gray at the default threshold") {
  raster::GraphicsScene s = scene_of("100 100 19.2 19.2 re f 0.5 g 100 300 100 2 re f");
  raster::RasterBitmap bm = raster::rasterize(s, 300);
  raster::BinaryImage bin = raster::binarize(bm, 100);
  CHECK(ink_count(bin) == 80 * 80);  // the gray rule vanished

  raster::BinaryImage all = raster::binarize(bm, 255);
  CHECK(ink_count(all) == (long long)bm.width * bm.height);

  raster::RasterBitmap white = raster::rasterize(scene_of(""), 72);
  CHECK(ink_count(raster::binarize(white, 100)) == 0);
}

TEST_CASE("binarize is monotone in the threshold") {
  synth::Rng content(11), perturb(11);
  synth::Perturbations none;
  synth::FormInstance fi = synth::make_form("liver_data", content, perturb, none);
  raster::RasterBitmap bm =
      raster::rasterize(scene_of(fi.pages[0].content()), 150);
  raster::BinaryImage a = raster::binarize(bm, 60);
  raster::BinaryImage b = raster::binarize(bm, 140);
  for (size_t i = 0; i < a.foreground.size(); ++i)
    if (a.foreground[i]) REQUIRE(b.foreground[i]);
}

TEST_CASE("text removal completeness: text-only pages rasterize blank") {
  raster::GraphicsScene s = scene_of("BT /F1 10 Tf 72 700 Td (all text here) Tj ET");
  raster::RasterBitmap bm = raster::rasterize(s, 150);
  CHECK(ink_count(raster::binarize(bm, 255 - 1)) == 0);
}

TEST_CASE("rasterization is deterministic and matches the serial reference") {
  synth::Rng content(77), perturb(77);
  synth::Perturbations none;
  for (const std::string& id : {std::string("liver_data"), std::string("dcd_flowsheet")}) {
    synth::FormInstance fi = synth::make_form(id, content, perturb, none);
    for (const synth::PageSpec& page : fi.pages) {
      raster::GraphicsScene s = scene_of(page.content());
      raster::RasterBitmap serial = raster::rasterize_serial(s, 150);
      raster::RasterBitmap omp1 = raster::rasterize(s, 150, 1);
      raster::RasterBitmap omp4 = raster::rasterize(s, 150, 4);
      REQUIRE(serial.luminance == omp1.luminance);
      REQUIRE(serial.luminance == omp4.luminance);
      raster::RasterBitmap again = raster::rasterize(s, 150, 4);
      REQUIRE(again.luminance == omp4.luminance);

      raster::BinaryImage b_serial = raster::binarize_serial(serial, 100);
      raster::BinaryImage b_omp = raster::binarize(serial, 100, 4);
      REQUIRE(b_serial.foreground == b_omp.foreground);
    }
  }
}

TEST_CASE("cubic strokes flatten and draw") {
  raster::GraphicsScene s = scene_of("3 w 100 100 m 120 140 160 140 180 100 c S");
  raster::BinaryImage bin = raster::binarize(raster::rasterize(s, 300), 100);
  CHECK(ink_count(bin) > 500);  // a visible curved stroke
  // Deterministic across runs.
  raster::BinaryImage bin2 = raster::binarize(raster::rasterize(s, 300), 100);
  CHECK(bin.foreground == bin2.foreground);
}

TEST_CASE("pgm and pbm dumps carry correct headers") {
  raster::GraphicsScene s = scene_of("0 0 7.2 7.2 re f", 36, 36);
  raster::RasterBitmap bm = raster::rasterize(s, 72);
  std::string pgm = raster::to_pgm(bm);
  CHECK(pgm.substr(0, 3) == "P5\n");
  CHECK(pgm.find("36 36") != std::string::npos);
  raster::BinaryImage bin = raster::binarize(bm, 100);
  std::string pbm = raster::to_pbm(bin);
  CHECK(pbm.substr(0, 3) == "P4\n");
}
