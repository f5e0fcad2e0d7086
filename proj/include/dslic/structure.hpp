#pragma once

#include <cstdint>
#include <vector>

#include "dslic/image.hpp"
#include "dslic/plane.hpp"

namespace dslic {

inline constexpr double kDefaultSigma = 20.0;
inline constexpr double kDefaultClamp = 2.0 / 255.0;

/// Structure density of an image.
///
/// `f` is the Gaussian-smoothed, clamped gradient magnitude normalised so that
/// its maximum is 1 (or identically 0 for gradient-free input). `g` rescales
/// search radii: g(x) = exp(f(x) - f_mean), so g > 0 and g == 1 wherever f
/// equals its grid mean.
struct StructureMap {
  Plane<double> f;
  Plane<double> g;
  double f_mean = 0.0;
  double sigma = kDefaultSigma;
  double clamp = kDefaultClamp;
};

/// |DI| with central differences inside and one-sided differences on the
/// border. Values lie in [0, sqrt(2)] for input in [0,1]. Requires >= 2x2.
Plane<double> gradient_magnitude(const Plane<double>& grey);

/// Normalised 1-D Gaussian taps for offsets -r..r, r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur. Taps falling outside the plane are dropped and the
/// remaining weights renormalised, so a constant plane maps to itself.
Plane<double> gaussian_blur(const Plane<double>& plane, double sigma);

StructureMap compute_structure(const Plane<double>& grey,
                               double sigma = kDefaultSigma,
                               double clamp = kDefaultClamp);
StructureMap compute_structure(const Image& image,
                               double sigma = kDefaultSigma,
                               double clamp = kDefaultClamp);

/// f scaled to 8 bits (round(f * 255)) for inspection.
Plane<std::uint8_t> structure_to_grey8(const StructureMap& smap);

}  // namespace dslic
