#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formpipe/detect/components.hpp"

namespace formpipe::detect {

enum class CheckState { Checked, Unchecked };

struct CheckboxObservation {
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // pixels
  double fill_fraction = 0.0;
  CheckState state = CheckState::Unchecked;
  double page_x = 0, page_y = 0;  // bbox center in PDF points (y-up)
  int page_index = 0;             // set by the pipeline
};

// Paper-anchored constants, expressed at 300 dpi and scaled elsewhere.
constexpr double kNominalSidePxAt300 = 80.0;
constexpr double kCheckedThresholdAt300 = 2500.0;

inline double nominal_side(int dpi) { return kNominalSidePxAt300 * dpi / 300.0; }
inline double checked_threshold(int dpi) {
  double s = double(dpi) / 300.0;
  return kCheckedThresholdAt300 * s * s;
}

// Size gate: both bbox sides within [0.6, 1.4] x nominal_side(dpi) and aspect
// ratio within [0.75, 1.33]; survivors are classified by pixel count against
// checked_threshold(dpi). image_height_px is needed to flip into page points.
std::optional<CheckboxObservation> classify_checkbox(const Component& c, int dpi,
                                                     int image_height_px);

// Debug dump: CSV of label,bbox,pixel_count,verdict per component.
std::string components_debug_csv(const std::vector<Component>& components, int dpi,
                                 int image_height_px);

}  // namespace formpipe::detect
