#include "dslic/overlay.hpp"

#include <algorithm>

#include "dslic/error.hpp"

namespace dslic {

Plane<std::uint8_t> boundary_mask(const LabelMap& labels, int line_width) {
  if (line_width < 1)
    throw Error(ErrorCode::invalid_argument, "line width must be >= 1");
  const int w = labels.width(), h = labels.height();
  Plane<std::uint8_t> edge(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = labels.at(x, y);
      if ((x > 0 && labels.at(x - 1, y) != l) ||
          (x + 1 < w && labels.at(x + 1, y) != l) ||
          (y > 0 && labels.at(x, y - 1) != l) ||
          (y + 1 < h && labels.at(x, y + 1) != l))
        edge.at(x, y) = 1;
    }
  }
  if (line_width == 1) return edge;

  const int grow = line_width - 1;
  Plane<std::uint8_t> thick(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!edge.at(x, y)) continue;
      for (int yy = std::max(0, y - grow); yy <= std::min(h - 1, y + grow); ++yy)
        for (int xx = std::max(0, x - grow); xx <= std::min(w - 1, x + grow); ++xx)
          thick.at(xx, yy) = 1;
    }
  return thick;
}

Plane<Rgb> render_overlay(const Image& image, const LabelMap& labels,
                          const OverlaySpec& spec) {
  if (labels.width() != image.width() || labels.height() != image.height())
    throw Error(ErrorCode::dimension, "label map does not match image");
  const Plane<std::uint8_t> mask = boundary_mask(labels, spec.line_width);
  Plane<Rgb> out = image.rgb();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mask[i]) out[i] = spec.boundary_color;
  return out;
}

}  // namespace dslic
