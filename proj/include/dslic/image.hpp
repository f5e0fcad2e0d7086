#pragma once

#include <cstdint>
#include <vector>

#include "dslic/plane.hpp"

namespace dslic {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// CIELAB triple. L in [0,100], a/b roughly [-128,127].
struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Rec.601 luma scaled to [0,1].
double to_greyscale(Rgb px) noexcept;

/// sRGB (gamma-encoded, D65) to CIELAB.
Lab srgb_to_lab(Rgb px) noexcept;

/// Immutable raster carrying the RGB, greyscale and CIELAB planes.
///
/// All three planes are derived once at construction and share the same
/// dimensions; instances are safe to share across threads.
class Image {
 public:
  static Image from_rgb(int width, int height, std::vector<Rgb> pixels);

  int width() const noexcept { return rgb_.width(); }
  int height() const noexcept { return rgb_.height(); }
  std::size_t pixel_count() const noexcept { return rgb_.size(); }

  const Plane<Rgb>& rgb() const noexcept { return rgb_; }
  const Plane<double>& grey() const noexcept { return grey_; }
  const Plane<Lab>& lab() const noexcept { return lab_; }

 private:
  Image() = default;

  Plane<Rgb> rgb_;
  Plane<double> grey_;
  Plane<Lab> lab_;
};

}  // namespace dslic
