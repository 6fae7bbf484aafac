#pragma once

#include <cstdint>
#include <vector>

#include "formpipe/raster/raster.hpp"

namespace formpipe::detect {

struct Component {
  int label = 0;  // dense from 1, ordered by first pixel in row-major scan
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive bbox
  long long pixel_count = 0;
  double centroid_x = 0, centroid_y = 0;

  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
  long long bbox_area() const { return (long long)width() * height(); }
};

// 8-connectivity labeling. Labels are dense from 1 in row-major order of each
// component's first pixel, which makes the serial and parallel paths agree
// bit-for-bit. The OpenMP variant labels row strips independently and merges
// across strip boundaries.
std::vector<Component> connected_components(const raster::BinaryImage& img, int n_threads = 0);
std::vector<Component> connected_components_serial(const raster::BinaryImage& img);

// Optional full label image (used by tests and debug dumps).
std::vector<Component> connected_components_serial(const raster::BinaryImage& img,
                                                   std::vector<int32_t>* label_image);

// Groups components into rows by centroid-y (within row_tolerance), rows
// top-down, left-to-right inside a row, ties by label.
// row_tolerance < 0 selects the default: half the median bbox height.
std::vector<Component> order_reading(std::vector<Component> components,
                                     double row_tolerance = -1.0);

}  // namespace formpipe::detect
