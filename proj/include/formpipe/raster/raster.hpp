#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "formpipe/raster/scene.hpp"

namespace formpipe::raster {

// Grayscale page raster; 255 = background white, row 0 = top of page.
struct RasterBitmap {
  int width = 0;
  int height = 0;
  int dpi = 300;
  std::vector<uint8_t> luminance;  // row-major, width*height

  uint8_t at(int x, int y) const { return luminance[size_t(y) * width + x]; }
};

// Thresholded form: 1 = ink.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> foreground;  // row-major, width*height, 0/1

  bool at(int x, int y) const { return foreground[size_t(y) * width + x] != 0; }
  size_t count() const;
};

// Scanline rasterization, nonzero winding, pixel-center sampling, no
// anti-aliasing. Fills of a single axis-aligned rectangle snap to
// round(w*dpi/72) x round(h*dpi/72) pixels so ink counts stay analytic.
// The OpenMP variant parallelizes over scanlines; n_threads = 0 uses the
// OpenMP default, 1 is effectively serial (used inside the batch pool).
RasterBitmap rasterize(const GraphicsScene& scene, int dpi, int n_threads = 0);

// Straight-line serial implementation kept as the comparison reference;
// byte-identical to rasterize() by construction.
RasterBitmap rasterize_serial(const GraphicsScene& scene, int dpi);

// foreground(p) <=> luminance(p) <= ink_threshold. Default threshold 100
// keeps black ink and drops the 50%-gray table rules (luminance 128).
BinaryImage binarize(const RasterBitmap& bitmap, int ink_threshold = 100, int n_threads = 0);
BinaryImage binarize_serial(const RasterBitmap& bitmap, int ink_threshold = 100);

// Debug dumps.
std::string to_pgm(const RasterBitmap& bitmap);  // P5
std::string to_pbm(const BinaryImage& image);    // P4

}  // namespace formpipe::raster
