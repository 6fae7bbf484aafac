// Kernel benchmark: serial reference vs OpenMP variants of the raster,
// binarize and labeling stages, on synthetic liver-data pages.

#include <omp.h>

#include <cstdio>
#include <string>

#include "formpipe/detect/components.hpp"
#include "formpipe/pdf/content.hpp"
#include "formpipe/raster/raster.hpp"
#include "formpipe/raster/scene.hpp"
#include "formpipe/synth/forms.hpp"

using namespace formpipe;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    double t0 = omp_get_wtime();
    f();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int dpi = argc > 1 ? atoi(argv[1]) : 300;
  int reps = argc > 2 ? atoi(argv[2]) : 3;
  int threads = omp_get_max_threads();

  synth::Rng content(42), perturb(42);
  synth::Perturbations none;
  synth::FormInstance fi = synth::make_form("liver_data", content, perturb, none);
  raster::GraphicsScene scene = raster::build_scene(
      raster::strip_text_operators(pdf::tokenize_content(fi.pages[0].content())),
      synth::kPageW, synth::kPageH);

  std::printf("page %gx%g pt at %d dpi, %d elements, %d threads, best of %d\n",
              scene.page_width, scene.page_height, dpi, int(scene.elements.size()), threads,
              reps);

  raster::RasterBitmap bm;
  double t_r_serial = time_best_of(reps, [&] { bm = raster::rasterize_serial(scene, dpi); });
  double t_r_omp = time_best_of(reps, [&] { bm = raster::rasterize(scene, dpi); });
  std::printf("%-22s serial %8.2f ms   omp %8.2f ms   speedup %.2fx\n", "rasterize",
              t_r_serial * 1e3, t_r_omp * 1e3, t_r_serial / t_r_omp);

  raster::BinaryImage bin;
  double t_b_serial = time_best_of(reps, [&] { bin = raster::binarize_serial(bm, 100); });
  double t_b_omp = time_best_of(reps, [&] { bin = raster::binarize(bm, 100); });
  std::printf("%-22s serial %8.2f ms   omp %8.2f ms   speedup %.2fx\n", "binarize",
              t_b_serial * 1e3, t_b_omp * 1e3, t_b_serial / t_b_omp);

  std::vector<detect::Component> comps;
  double t_c_serial =
      time_best_of(reps, [&] { comps = detect::connected_components_serial(bin); });
  double t_c_omp = time_best_of(reps, [&] { comps = detect::connected_components(bin); });
  std::printf("%-22s serial %8.2f ms   omp %8.2f ms   speedup %.2fx   (%zu components)\n",
              "connected_components", t_c_serial * 1e3, t_c_omp * 1e3, t_c_serial / t_c_omp,
              comps.size());
  return 0;
}
