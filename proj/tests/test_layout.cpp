#include "doctest.h"
#include <cmath>

#include "formpipe/layout/layout.hpp"
#include "formpipe/pdf/content.hpp"
#include "formpipe/synth/forms.hpp"
#include "support.hpp"

using namespace formpipe;

TEST_CASE("extract_text_runs positions a single Tj") {
  auto ops = pdf::tokenize_content("BT 72 700 Td (DCD FLOWSHEET) Tj ET");
  auto runs = layout::text_runs_from_ops(ops);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].text == "DCD FLOWSHEET");
  CHECK(runs[0].x == doctest::Approx(72));
  CHECK(runs[0].y == doctest::Approx(700));
}

TEST_CASE("zero text operators yield no runs") {
  auto ops = pdf::tokenize_content("0 0 10 10 re f");
  CHECK(layout::text_runs_from_ops(ops).empty());
}

TEST_CASE("Td between two Tj moves the second run") {
  auto ops = pdf::tokenize_content("BT 72 700 Td (A) Tj 0 -14 Td (B) Tj ET");
  auto runs = layout::text_runs_from_ops(ops);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].y == doctest::Approx(700));
  CHECK(runs[1].y == doctest::Approx(686));
  CHECK(runs[1].y - runs[0].y == doctest::Approx(-14));
}

TEST_CASE("TJ arrays emit one run with kerning applied to the pen") {
  auto ops = pdf::tokenize_content("BT /F1 10 Tf 10 100 Td [(AB) -500 (CD)] TJ (E) Tj ET");
  auto runs = layout::text_runs_from_ops(ops);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].text == "ABCD");
  // Pen after TJ: 4 glyphs * 6 pt + 500/1000 * 10 pt kern = 29 pt.
  CHECK(runs[1].x == doctest::Approx(10 + 4 * 6 + 5));
}

TEST_CASE("rotated text is a typed skip") {
  auto ops = pdf::tokenize_content("BT 0 1 -1 0 100 100 Tm (rot) Tj ET");
  CHECK_THROWS_AS(layout::text_runs_from_ops(ops), layout::PageSkipError);
}

TEST_CASE("compose_layout maps points to grid cells") {
  std::vector<layout::TextRun> runs = {
      {"Heparin:", 0, 700, 10},
      {"Yes", 180, 700, 10},
  };
  layout::LayoutGrid grid = layout::compose_layout(runs, 792, 6, 12);
  // row = round((792-700)/12) = 8, col = round(180/6) = 30.
  auto lines = layout::render_lines(grid);
  REQUIRE(lines.size() == 9);
  CHECK(lines[8] == "Heparin:" + std::string(22, ' ') + "Yes");
}

TEST_CASE("same baseline keeps horizontal order; adjacent rows stay ordered") {
  std::vector<layout::TextRun> runs = {
      {"left", 72, 700, 10}, {"right", 200, 700, 10}, {"below", 72, 686, 10}};
  layout::LayoutGrid grid = layout::compose_layout(runs, 792, 6, 12);
  auto lines = layout::render_lines(grid);
  int row_top = int(std::lround((792.0 - 700.0) / 12.0));
  CHECK(lines[row_top].find("left") < lines[row_top].find("right"));
  CHECK(lines[row_top + 1].find("below") != std::string::npos);
}

TEST_CASE("empty runs produce a 0x0 grid and no lines") {
  layout::LayoutGrid grid = layout::compose_layout({}, 792, 6, 12);
  CHECK(grid.rows() == 0);
  CHECK(grid.cols() == 0);
  CHECK(layout::render_lines(grid).empty());
}

TEST_CASE("blank rows are preserved as empty strings") {
  std::vector<layout::TextRun> runs = {{"top", 0, 792 - 0 * 12, 10},
                                       {"bottom", 0, 792 - 2 * 12, 10}};
  layout::LayoutGrid grid = layout::compose_layout(runs, 792, 6, 12);
  auto lines = layout::render_lines(grid);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1] == "");
}

TEST_CASE("cell collisions are reported and last writer wins") {
  std::vector<layout::TextRun> runs = {{"XX", 0, 700, 10}, {"YY", 0, 700, 10}};
  layout::LayoutGrid grid = layout::compose_layout(runs, 792, 6, 12);
  CHECK(grid.collisions.size() == 2);
  auto lines = layout::render_lines(grid);
  CHECK(lines.back() == "YY");
}

TEST_CASE("rounding is half away from zero") {
  // x = 9 pt with 6 pt pitch: 1.5 columns, rounds to 2 (not banker's 1).
  std::vector<layout::TextRun> runs = {{"A", 9, 700, 10}};
  layout::LayoutGrid grid = layout::compose_layout(runs, 792, 6, 12);
  auto lines = layout::render_lines(grid);
  CHECK(lines.back() == "  A");
}

TEST_CASE("property: order preservation on random baselines") {
  synth::Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    double y = 100 + rng.range(0, 500);
    double x1 = rng.range(0, 300);
    double x2 = x1 + 30 + rng.range(0, 200);
    std::vector<layout::TextRun> runs = {{"aa", x1, y, 10}, {"bb", x2, y, 10}};
    layout::LayoutGrid grid = layout::compose_layout(runs, 792, 6, 12);
    auto lines = layout::render_lines(grid);
    const std::string& row = lines.back();
    CHECK(row.find("aa") < row.find("bb"));
  }
}

TEST_CASE("synthetic round-trip: generator pages reproduce their layout text") {
  synth::Rng content(2024), perturb(2024);
  synth::Perturbations none;
  for (const std::string& id : synth::form_ids()) {
    synth::FormInstance fi = synth::make_form(id, content, perturb, none);
    for (const synth::PageSpec& page : fi.pages) {
      auto ops = pdf::tokenize_content(page.content());
      auto runs = layout::text_runs_from_ops(ops);
      layout::LayoutGrid grid = layout::compose_layout(runs, synth::kPageH, synth::kColPitch,
                                                       synth::kRowPitch);
      auto lines = layout::render_lines(grid);
      auto expected = page.lines();
      REQUIRE(lines.size() == expected.size());
      for (size_t i = 0; i < lines.size(); ++i) {
        INFO(id << " row " << i);
        CHECK(lines[i] == expected[i]);
      }
    }
  }
}
