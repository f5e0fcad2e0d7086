#pragma once

#include <cstdint>

#include "dslic/image.hpp"
#include "dslic/plane.hpp"

namespace dslic {

struct OverlaySpec {
  Rgb boundary_color{255, 255, 0};
  int line_width = 1;
};

/// 1 where a pixel has a 4-neighbour with a different label. Widths above 1
/// grow the mask by (line_width - 1) pixels in every direction.
Plane<std::uint8_t> boundary_mask(const LabelMap& labels, int line_width = 1);

/// Input image with boundary pixels recoloured.
Plane<Rgb> render_overlay(const Image& image, const LabelMap& labels,
                          const OverlaySpec& spec = {});

}  // namespace dslic
