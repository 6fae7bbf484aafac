#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "formpipe/detect/components.hpp"
#include "formpipe/grammar/registry.hpp"

namespace testsupport {

inline std::filesystem::path source_dir() { return FORMPIPE_SOURCE_DIR; }
inline std::filesystem::path grammars_dir() { return source_dir() / "grammars"; }
inline std::filesystem::path grammars_v1_dir() {
  return source_dir() / "tests" / "fixtures" / "grammars_v1";
}

inline const formpipe::grammar::Registry& shipped_registry() {
  static formpipe::grammar::Registry reg =
      formpipe::grammar::Registry::load_dir(grammars_dir());
  return reg;
}

inline const formpipe::grammar::Registry& draft_registry() {
  static formpipe::grammar::Registry reg =
      formpipe::grammar::Registry::load_dir(grammars_v1_dir());
  return reg;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("formpipe_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// Independent labeling oracle: breadth-first flood fill, 8-connectivity.
// Deliberately naive; shares nothing with the production implementation.
inline std::vector<formpipe::detect::Component> flood_fill_oracle(
    const formpipe::raster::BinaryImage& img) {
  using formpipe::detect::Component;
  const int w = img.width, h = img.height;
  std::vector<int> label(size_t(w) * h, 0);
  std::vector<Component> out;
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.at(x, y) || label[size_t(y) * w + x]) continue;
      ++next;
      Component c;
      c.label = next;
      c.min_x = c.max_x = x;
      c.min_y = c.max_y = y;
      double sx = 0, sy = 0;
      std::vector<std::pair<int, int>> queue{{x, y}};
      label[size_t(y) * w + x] = next;
      size_t qi = 0;
      while (qi < queue.size()) {
        auto [cx, cy] = queue[qi++];
        c.pixel_count++;
        sx += cx;
        sy += cy;
        c.min_x = std::min(c.min_x, cx);
        c.max_x = std::max(c.max_x, cx);
        c.min_y = std::min(c.min_y, cy);
        c.max_y = std::max(c.max_y, cy);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (!img.at(nx, ny) || label[size_t(ny) * w + nx]) continue;
            label[size_t(ny) * w + nx] = next;
            queue.emplace_back(nx, ny);
          }
      }
      c.centroid_x = sx / double(c.pixel_count);
      c.centroid_y = sy / double(c.pixel_count);
      out.push_back(c);
    }
  }
  return out;
}

inline bool same_components(const std::vector<formpipe::detect::Component>& a,
                            const std::vector<formpipe::detect::Component>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.label != y.label || x.pixel_count != y.pixel_count || x.min_x != y.min_x ||
        x.min_y != y.min_y || x.max_x != y.max_x || x.max_y != y.max_y)
      return false;
  }
  return true;
}

}  // namespace testsupport
