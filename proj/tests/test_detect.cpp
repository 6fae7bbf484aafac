#include "doctest.h"

#include "formpipe/detect/checkbox.hpp"
#include "formpipe/detect/components.hpp"
#include "formpipe/synth/forms.hpp"
#include "support.hpp"

using namespace formpipe;
using testsupport::flood_fill_oracle;
using testsupport::same_components;

namespace {

raster::BinaryImage image_from(int w, int h, const std::vector<std::string>& rows) {
  raster::BinaryImage img;
  img.width = w;
  img.height = h;
  img.foreground.assign(size_t(w) * h, 0);
  for (int y = 0; y < int(rows.size()); ++y)
    for (int x = 0; x < int(rows[y].size()); ++x)
      if (rows[y][x] == '#') img.foreground[size_t(y) * w + x] = 1;
  return img;
}

void fill_rect(raster::BinaryImage& img, int x0, int y0, int w, int h) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) img.foreground[size_t(y) * img.width + x] = 1;
}

}  // namespace

TEST_CASE("two disjoint squares give two components of 100 pixels") {
  raster::BinaryImage img;
  img.width = 64;
  img.height = 64;
  img.foreground.assign(64 * 64, 0);
  fill_rect(img, 2, 2, 10, 10);
  fill_rect(img, 30, 30, 10, 10);
  auto comps = detect::connected_components(img);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].pixel_count == 100);
  CHECK(comps[1].pixel_count == 100);
  CHECK(same_components(comps, flood_fill_oracle(img)));
}

TEST_CASE("empty image yields no components") {
  raster::BinaryImage img;
  img.width = 16;
  img.height = 16;
  img.foreground.assign(256, 0);
  CHECK(detect::connected_components(img).empty());
  CHECK(detect::connected_components_serial(img).empty());
}

TEST_CASE("diagonal touch merges under 8-connectivity") {
  auto img = image_from(8, 8, {
                                  "##......",
                                  "##......",
                                  "..##....",
                                  "..##....",
                              });
  auto comps = detect::connected_components(img);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].pixel_count == 8);
  CHECK(same_components(comps, flood_fill_oracle(img)));
}

TEST_CASE("labels are dense from 1 in row-major first-pixel order") {
  auto img = image_from(16, 4, {
                                   "...#....#.......",
                                   "................",
                                   "#...............",
                               });
  auto comps = detect::connected_components(img);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].label == 1);
  CHECK(comps[0].min_x == 3);
  CHECK(comps[1].label == 2);
  CHECK(comps[1].min_x == 8);
  CHECK(comps[2].label == 3);
  CHECK(comps[2].min_y == 2);
}

TEST_CASE("oracle equivalence on 500 random small images") {
  synth::Rng rng(123);
  for (int trial = 0; trial < 500; ++trial) {
    int w = rng.range(1, 64), h = rng.range(1, 64);
    raster::BinaryImage img;
    img.width = w;
    img.height = h;
    img.foreground.resize(size_t(w) * h);
    double density = rng.unit();
    for (auto& p : img.foreground) p = rng.chance(density) ? 1 : 0;

    auto oracle = flood_fill_oracle(img);
    auto serial = detect::connected_components_serial(img);
    auto parallel = detect::connected_components(img, rng.range(1, 4));
    INFO("trial " << trial << " " << w << "x" << h);
    REQUIRE(same_components(serial, oracle));
    REQUIRE(same_components(parallel, oracle));

    long long total = 0;
    for (const auto& c : serial) total += c.pixel_count;
    long long fg = 0;
    for (auto p : img.foreground) fg += p;
    REQUIRE(total == fg);  // every foreground pixel in exactly one component
  }
}

TEST_CASE("order_reading arranges a 2x2 grid left-right then top-down") {
  raster::BinaryImage img;
  img.width = 100;
  img.height = 100;
  img.foreground.assign(100 * 100, 0);
  fill_rect(img, 10, 10, 8, 8);   // top-left
  fill_rect(img, 60, 11, 8, 8);   // top-right (1 px lower)
  fill_rect(img, 10, 60, 8, 8);   // bottom-left
  fill_rect(img, 60, 60, 8, 8);   // bottom-right
  auto comps = detect::order_reading(detect::connected_components(img), 10);
  REQUIRE(comps.size() == 4);
  CHECK(comps[0].min_x == 10);
  CHECK(comps[0].min_y == 10);
  CHECK(comps[1].min_x == 60);
  CHECK(comps[1].min_y == 11);  // same row despite the 1 px offset
  CHECK(comps[2].min_y == 60);
  CHECK(comps[2].min_x == 10);
  CHECK(comps[3].min_x == 60);
}

TEST_CASE("order_reading of a single component is itself") {
  detect::Component c;
  c.label = 1;
  c.min_x = c.min_y = 0;
  c.max_x = c.max_y = 4;
  c.pixel_count = 25;
  c.centroid_x = c.centroid_y = 2;
  auto out = detect::order_reading({c});
  REQUIRE(out.size() == 1);
  CHECK(out[0].label == 1);
}

TEST_CASE("order_reading is a permutation") {
  synth::Rng rng(321);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<detect::Component> comps;
    int n = rng.range(1, 40);
    for (int i = 0; i < n; ++i) {
      detect::Component c;
      c.label = i + 1;
      c.min_x = rng.range(0, 500);
      c.min_y = rng.range(0, 500);
      c.max_x = c.min_x + rng.range(1, 30);
      c.max_y = c.min_y + rng.range(1, 30);
      c.pixel_count = rng.range(1, 100);
      c.centroid_x = (c.min_x + c.max_x) / 2.0;
      c.centroid_y = (c.min_y + c.max_y) / 2.0;
      comps.push_back(c);
    }
    auto out = detect::order_reading(comps, rng.range(0, 20));
    REQUIRE(out.size() == comps.size());
    std::vector<int> seen(n + 1, 0);
    for (const auto& c : out) seen[c.label]++;
    for (int i = 1; i <= n; ++i) REQUIRE(seen[i] == 1);
  }
}

TEST_CASE("classify_checkbox applies the published 300 dpi thresholds") {
  detect::Component c;
  c.label = 1;
  c.min_x = 100;
  c.min_y = 100;
  c.max_x = 179;
  c.max_y = 179;  // 80x80 box

  c.pixel_count = 6000;
  auto checked = detect::classify_checkbox(c, 300, 3300);
  REQUIRE(checked.has_value());
  CHECK(checked->state == detect::CheckState::Checked);
  CHECK(checked->fill_fraction == doctest::Approx(6000.0 / 6400.0));

  c.pixel_count = 1216;  // outline only
  auto unchecked = detect::classify_checkbox(c, 300, 3300);
  REQUIRE(unchecked.has_value());
  CHECK(unchecked->state == detect::CheckState::Unchecked);

  detect::Component tiny;
  tiny.min_x = tiny.min_y = 0;
  tiny.max_x = tiny.max_y = 7;  // 8x8
  tiny.pixel_count = 60;
  CHECK(!detect::classify_checkbox(tiny, 300, 3300).has_value());
}

TEST_CASE("classify_checkbox thresholds scale with dpi squared") {
  // 40x40 box at 150 dpi is the same physical box as 80x80 at 300.
  detect::Component c;
  c.min_x = c.min_y = 0;
  c.max_x = c.max_y = 39;
  c.pixel_count = 700;  // above 2500/4 = 625
  auto obs = detect::classify_checkbox(c, 150, 1650);
  REQUIRE(obs.has_value());
  CHECK(obs->state == detect::CheckState::Checked);
  c.pixel_count = 600;  // below the scaled threshold
  obs = detect::classify_checkbox(c, 150, 1650);
  REQUIRE(obs.has_value());
  CHECK(obs->state == detect::CheckState::Unchecked);
}

TEST_CASE("page point conversion flips y") {
  detect::Component c;
  c.min_x = 0;
  c.min_y = 0;
  c.max_x = 79;
  c.max_y = 79;
  c.pixel_count = 3000;
  auto obs = detect::classify_checkbox(c, 300, 3300);
  REQUIRE(obs.has_value());
  CHECK(obs->page_x == doctest::Approx(40 * 72.0 / 300));
  CHECK(obs->page_y == doctest::Approx((3300 - 40) * 72.0 / 300));
}

TEST_CASE("aspect ratio gate rejects elongated components") {
  detect::Component c;
  c.min_x = c.min_y = 0;
  c.max_x = 111;  // 112 wide
  c.max_y = 59;   // 60 tall: both sides inside the size gate, ratio 1.87
  c.pixel_count = 3000;
  CHECK(!detect::classify_checkbox(c, 300, 3300).has_value());
}

TEST_CASE("components debug CSV lists verdicts") {
  raster::BinaryImage img;
  img.width = 200;
  img.height = 200;
  img.foreground.assign(200 * 200, 0);
  fill_rect(img, 10, 10, 80, 80);
  auto comps = detect::connected_components(img);
  std::string csv = detect::components_debug_csv(comps, 300, 200);
  CHECK(csv.find("label,min_x") == 0);
  CHECK(csv.find("checked") != std::string::npos);
}
