#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dslic/image.hpp"
#include "dslic/plane.hpp"
#include "dslic/structure.hpp"

namespace dslic {

enum class Algorithm { slic, dslic };

/// How colour and spatial distance are combined.
///  - paper_literal: sqrt(ds^2 + (dc / S)^2 m^2)
///  - canonical:     sqrt(dc^2 + (ds / S)^2 m^2)  (original SLIC weighting)
enum class DistanceForm { paper_literal, canonical };
/// How g rescales a dSLIC window: 2S/g widens windows where f is below its
/// mean (uniform areas); 2S*g widens them where f is above it.
enum class RadiusScaling { divide_by_g, multiply_by_g };

const char* to_string(Algorithm algo) noexcept;
const char* to_string(DistanceForm form) noexcept;
const char* to_string(RadiusScaling scaling) noexcept;

struct Params {
  int k = 400;
  double m = 20.0;
  int max_iters = 10;
  /// Iteration stops once the residual drops to this level.
  double threshold = 0.0;
  Algorithm algo = Algorithm::dslic;
  DistanceForm distance_form = DistanceForm::paper_literal;
  RadiusScaling radius_scaling = RadiusScaling::divide_by_g;
  double sigma = kDefaultSigma;
  double clamp = kDefaultClamp;

  /// Throws Error{invalid_argument} unless k >= 1, m > 0, max_iters >= 1,
  /// sigma > 0, clamp > 0 and threshold >= 0.
  void validate() const;
};

struct ClusterFeature {
  double cx = 0.0;
  double cy = 0.0;
  Lab color;
  std::int64_t member_count = 0;
};

struct Segmentation {
  LabelMap labels;
  std::vector<ClusterFeature> centers;
  double grid_interval = 0.0;
  int iterations_run = 0;
  double residual = 0.0;
};

/// S = sqrt(w h / k).
double grid_interval(int width, int height, int k);

/// Regular seeding with spacing ~S, each seed moved to the lowest-gradient
/// pixel of its 3x3 neighbourhood (the grid point wins ties).
std::vector<ClusterFeature> initialize(const Image& image, int k);

double distance(double x, double y, const Lab& color,
                const ClusterFeature& center, double grid_interval, double m,
                DistanceForm form) noexcept;

/// Per-center Chebyshev search radius: 2S/g(center) or 2S*g(center) with a
/// structure map, 2S without one. g is sampled at the rounded, clamped centre
/// position.
std::vector<double> search_radii(
    std::span<const ClusterFeature> centers, const StructureMap* smap,
    double grid_interval,
    RadiusScaling scaling = RadiusScaling::divide_by_g);

struct Assignment {
  LabelMap labels;
  /// Distance to the chosen centre; +inf for pixels no window reached (those
  /// fall back to the spatially nearest centre).
  Plane<double> best_distance;
  std::int64_t evaluations = 0;
};

Assignment assign(const Image& image, std::span<const ClusterFeature> centers,
                  const StructureMap* smap, double grid_interval,
                  const Params& params);

/// Same as assign() with explicit per-centre radii.
Assignment assign_with_radii(const Image& image,
                             std::span<const ClusterFeature> centers,
                             std::span<const double> radii,
                             double grid_interval, const Params& params);

struct UpdateResult {
  std::vector<ClusterFeature> centers;
  /// Summed Euclidean displacement of the spatial centroids.
  double residual = 0.0;
};

/// Moves every centre to the mean (x, y, colour) of its members. Centres that
/// lost all members keep their previous feature.
UpdateResult update(const Image& image, const LabelMap& labels,
                    std::span<const ClusterFeature> old_centers);

/// Makes every label's pixel set 4-connected. The largest component of each
/// label keeps it; the others are absorbed by adjacent resolved components.
LabelMap enforce_connectivity(const LabelMap& labels);

/// Full SLIC / dSLIC run: seed, iterate assign/update, enforce connectivity.
/// Output labels are compact (0..n-1) and `centers` describes the final map.
Segmentation segment(const Image& image, const Params& params);

}  // namespace dslic
