#include "formpipe/detect/checkbox.hpp"

#include <cstdio>

namespace formpipe::detect {

std::optional<CheckboxObservation> classify_checkbox(const Component& c, int dpi,
                                                     int image_height_px) {
  double nominal = nominal_side(dpi);
  double w = c.width(), h = c.height();
  if (w < 0.6 * nominal || w > 1.4 * nominal) return std::nullopt;
  if (h < 0.6 * nominal || h > 1.4 * nominal) return std::nullopt;
  double aspect = w / h;
  if (aspect < 0.75 || aspect > 1.33) return std::nullopt;

  CheckboxObservation obs;
  obs.min_x = c.min_x;
  obs.min_y = c.min_y;
  obs.max_x = c.max_x;
  obs.max_y = c.max_y;
  obs.fill_fraction = double(c.pixel_count) / double(c.bbox_area());
  obs.state = double(c.pixel_count) >= checked_threshold(dpi) ? CheckState::Checked
                                                              : CheckState::Unchecked;
  double cx = (c.min_x + c.max_x + 1) / 2.0;
  double cy = (c.min_y + c.max_y + 1) / 2.0;
  obs.page_x = cx * 72.0 / dpi;
  obs.page_y = (image_height_px - cy) * 72.0 / dpi;
  return obs;
}

std::string components_debug_csv(const std::vector<Component>& components, int dpi,
                                 int image_height_px) {
  std::string out = "label,min_x,min_y,max_x,max_y,pixel_count,verdict\n";
  for (const Component& c : components) {
    auto obs = classify_checkbox(c, dpi, image_height_px);
    const char* verdict =
        !obs ? "not_a_checkbox"
             : (obs->state == CheckState::Checked ? "checked" : "unchecked");
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%lld,%s\n", c.label, c.min_x, c.min_y,
                  c.max_x, c.max_y, c.pixel_count, verdict);
    out += buf;
  }
  return out;
}

}  // namespace formpipe::detect
