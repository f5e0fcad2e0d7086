#include "dslic/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "dslic/error.hpp"

namespace dslic {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int round_clamped(double v, int hi) {
  return std::clamp(static_cast<int>(std::lround(v)), 0, hi);
}

double color_distance_sq(const Lab& p, const Lab& q) {
  const double dl = p.l - q.l, da = p.a - q.a, db = p.b - q.b;
  return dl * dl + da * da + db * db;
}

// Squared distance is ds2 * spatial_w + dc2 * color_w for both forms.
struct Weights {
  double spatial;
  double color;
};

Weights weights_for(DistanceForm form, double grid_interval, double m) {
  const double ratio = m / grid_interval;
  if (form == DistanceForm::paper_literal) return {1.0, ratio * ratio};
  return {ratio * ratio, 1.0};
}

// Compacts surviving labels (in centre order) and rebuilds their features.
void finalize(const Image& image, Segmentation& seg) {
  const int n_old = static_cast<int>(seg.centers.size());
  std::vector<std::int64_t> counts(n_old, 0);
  for (std::int32_t l : seg.labels.values()) ++counts[l];

  std::vector<std::int32_t> remap(n_old, -1);
  std::vector<ClusterFeature> kept;
  for (int i = 0; i < n_old; ++i) {
    if (counts[i] == 0) continue;
    remap[i] = static_cast<std::int32_t>(kept.size());
    kept.push_back(seg.centers[i]);
  }
  for (std::int32_t& l : seg.labels.values()) l = remap[l];

  UpdateResult u = update(image, seg.labels, kept);
  seg.centers = std::move(u.centers);
}

}  // namespace

const char* to_string(Algorithm algo) noexcept {
  return algo == Algorithm::slic ? "slic" : "dslic";
}

const char* to_string(DistanceForm form) noexcept {
  return form == DistanceForm::paper_literal ? "paper" : "canonical";
}

const char* to_string(RadiusScaling scaling) noexcept {
  return scaling == RadiusScaling::divide_by_g ? "divide" : "multiply";
}

void Params::validate() const {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (!(m > 0.0) || !std::isfinite(m))
    throw Error(ErrorCode::invalid_argument, "m must be positive");
  if (max_iters < 1)
    throw Error(ErrorCode::invalid_argument, "max_iters must be >= 1");
  if (!(threshold >= 0.0))
    throw Error(ErrorCode::invalid_argument, "threshold must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::invalid_argument, "sigma must be positive");
  if (!(clamp > 0.0) || !std::isfinite(clamp))
    throw Error(ErrorCode::invalid_argument, "clamp must be positive");
}

double grid_interval(int width, int height, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  return std::sqrt(static_cast<double>(width) * height / k);
}

std::vector<ClusterFeature> initialize(const Image& image, int k) {
  const int w = image.width(), h = image.height();
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (static_cast<std::size_t>(k) > image.pixel_count())
    throw Error(ErrorCode::invalid_argument,
                "k = " + std::to_string(k) + " exceeds the pixel count");

  const double s = grid_interval(w, h, k);
  const int nx = std::max(1, static_cast<int>(std::lround(w / s)));
  const int ny = std::max(1, static_cast<int>(std::lround(h / s)));
  const double step_x = static_cast<double>(w) / nx;
  const double step_y = static_cast<double>(h) / ny;

  std::optional<Plane<double>> grad;
  if (w >= 2 && h >= 2) grad = gradient_magnitude(image.grey());

  std::vector<ClusterFeature> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int gx = std::min(w - 1, static_cast<int>((i + 0.5) * step_x));
      int gy = std::min(h - 1, static_cast<int>((j + 0.5) * step_y));
      if (grad) {
        int bx = gx, by = gy;
        double best = grad->at(gx, gy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int x = gx + dx, y = gy + dy;
            if (!grad->contains(x, y)) continue;
            if (grad->at(x, y) < best) {
              best = grad->at(x, y);
              bx = x;
              by = y;
            }
          }
        }
        gx = bx;
        gy = by;
      }
      centers.push_back({static_cast<double>(gx), static_cast<double>(gy),
                         image.lab().at(gx, gy), 0});
    }
  }
  return centers;
}

double distance(double x, double y, const Lab& color,
                const ClusterFeature& center, double grid_interval, double m,
                DistanceForm form) noexcept {
  const double dx = x - center.cx, dy = y - center.cy;
  const double ds = std::sqrt(dx * dx + dy * dy);
  const double dc = std::sqrt(color_distance_sq(color, center.color));
  if (form == DistanceForm::paper_literal) {
    const double t = dc / grid_interval;
    return std::sqrt(ds * ds + t * t * m * m);
  }
  const double t = ds / grid_interval;
  return std::sqrt(dc * dc + t * t * m * m);
}

std::vector<double> search_radii(std::span<const ClusterFeature> centers,
                                 const StructureMap* smap,
                                 double grid_interval, RadiusScaling scaling) {
  std::vector<double> radii(centers.size(), 2.0 * grid_interval);
  if (smap == nullptr) return radii;
  const int w = smap->g.width(), h = smap->g.height();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const int x = round_clamped(centers[i].cx, w - 1);
    const int y = round_clamped(centers[i].cy, h - 1);
    const double g = smap->g.at(x, y);
    radii[i] = scaling == RadiusScaling::divide_by_g ? radii[i] / g : radii[i] * g;
  }
  return radii;
}

Assignment assign(const Image& image, std::span<const ClusterFeature> centers,
                  const StructureMap* smap, double grid_interval,
                  const Params& params) {
  if (smap && (smap->g.width() != image.width() ||
               smap->g.height() != image.height()))
    throw Error(ErrorCode::dimension, "structure map does not match image");
  const std::vector<double> radii = search_radii(centers, smap, grid_interval, params.radius_scaling);
  return assign_with_radii(image, centers, radii, grid_interval, params);
}

Assignment assign_with_radii(const Image& image,
                             std::span<const ClusterFeature> centers,
                             std::span<const double> radii,
                             double grid_interval, const Params& params) {
  if (centers.empty())
    throw Error(ErrorCode::invalid_argument, "assign needs at least one centre");
  if (radii.size() != centers.size())
    throw Error(ErrorCode::invalid_argument, "one radius per centre required");
  if (!(grid_interval > 0.0))
    throw Error(ErrorCode::invalid_argument, "grid interval must be positive");

  const int w = image.width(), h = image.height();
  const Weights wt = weights_for(params.distance_form, grid_interval, params.m);
  const Plane<Lab>& lab = image.lab();

  Assignment out{LabelMap(w, h, -1), Plane<double>(w, h, kInf), 0};
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const ClusterFeature& c = centers[i];
    const double r = radii[i];
    const int x0 = std::max(0, static_cast<int>(std::ceil(c.cx - r)));
    const int x1 = std::min(w - 1, static_cast<int>(std::floor(c.cx + r)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(c.cy - r)));
    const int y1 = std::min(h - 1, static_cast<int>(std::floor(c.cy + r)));
    if (x0 > x1 || y0 > y1) continue;
    out.evaluations += static_cast<std::int64_t>(x1 - x0 + 1) * (y1 - y0 + 1);

    const std::int32_t label = static_cast<std::int32_t>(i);
    for (int y = y0; y <= y1; ++y) {
      const double dy = y - c.cy;
      const double dy2 = dy * dy;
      const Lab* row_lab = lab.row(y).data();
      double* row_best = out.best_distance.row(y).data();
      std::int32_t* row_label = out.labels.row(y).data();
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - c.cx;
        const double d = (dx * dx + dy2) * wt.spatial +
                         color_distance_sq(row_lab[x], c.color) * wt.color;
        // Strict comparison: the lowest centre index wins ties.
        if (d < row_best[x]) {
          row_best[x] = d;
          row_label[x] = label;
        }
      }
    }
  }

  for (std::size_t p = 0; p < out.labels.size(); ++p) {
    if (out.labels[p] >= 0) {
      out.best_distance[p] = std::sqrt(out.best_distance[p]);
      continue;
    }
    // Outside every window: spatially nearest centre.
    const double x = static_cast<double>(p % w), y = static_cast<double>(p / w);
    double best = kInf;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double dx = x - centers[i].cx, dy = y - centers[i].cy;
      const double d = dx * dx + dy * dy;
      if (d < best) {
        best = d;
        out.labels[p] = static_cast<std::int32_t>(i);
      }
    }
  }
  return out;
}

UpdateResult update(const Image& image, const LabelMap& labels,
                    std::span<const ClusterFeature> old_centers) {
  if (labels.width() != image.width() || labels.height() != image.height())
    throw Error(ErrorCode::dimension, "label map does not match image");

  struct Sums {
    double x = 0, y = 0, l = 0, a = 0, b = 0;
    std::int64_t n = 0;
  };
  std::vector<Sums> sums(old_centers.size());
  const int w = labels.width();
  for (int y = 0; y < labels.height(); ++y) {
    auto row = labels.row(y);
    auto lab = image.lab().row(y);
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = row[x];
      if (l < 0 || static_cast<std::size_t>(l) >= sums.size())
        throw Error(ErrorCode::range, "label refers to a missing centre");
      Sums& s = sums[l];
      s.x += x;
      s.y += y;
      s.l += lab[x].l;
      s.a += lab[x].a;
      s.b += lab[x].b;
      ++s.n;
    }
  }

  UpdateResult out;
  out.centers.assign(old_centers.begin(), old_centers.end());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const Sums& s = sums[i];
    ClusterFeature& c = out.centers[i];
    c.member_count = s.n;
    if (s.n == 0) continue;
    const double n = static_cast<double>(s.n);
    const double nx = s.x / n, ny = s.y / n;
    out.residual += std::hypot(nx - old_centers[i].cx, ny - old_centers[i].cy);
    c.cx = nx;
    c.cy = ny;
    c.color = {s.l / n, s.a / n, s.b / n};
  }
  return out;
}

Segmentation segment(const Image& image, const Params& params) {
  params.validate();

  Segmentation seg;
  seg.grid_interval = grid_interval(image.width(), image.height(), params.k);
  std::vector<ClusterFeature> centers = initialize(image, params.k);

  std::optional<StructureMap> smap;
  if (params.algo == Algorithm::dslic)
    smap = compute_structure(image, params.sigma, params.clamp);

  LabelMap labels;
  double residual = kInf;
  int t = 0;
  while (t < params.max_iters) {
    Assignment a = assign(image, centers, smap ? &*smap : nullptr,
                          seg.grid_interval, params);
    UpdateResult u = update(image, a.labels, centers);
    labels = std::move(a.labels);
    centers = std::move(u.centers);
    residual = u.residual;
    ++t;
    if (residual <= params.threshold) break;
  }

  seg.labels = enforce_connectivity(labels);
  seg.centers = std::move(centers);
  seg.iterations_run = t;
  seg.residual = residual;
  finalize(image, seg);
  return seg;
}

}  // namespace dslic
