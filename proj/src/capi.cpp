#include "dslic/dslic.h"

#include <algorithm>
#include <exception>
#include <iterator>
#include <new>
#include <string>

#include "dslic/bench.hpp"
#include "dslic/clustering.hpp"
#include "dslic/error.hpp"
#include "dslic/imageio.hpp"
#include "dslic/metrics.hpp"
#include "dslic/overlay.hpp"
#include "dslic/structure.hpp"

struct dslic_image {
  dslic::Image rep;
};

struct dslic_label_map {
  dslic::LabelMap rep;
};

struct dslic_segmentation {
  dslic::Segmentation rep;
  dslic_label_map labels;
};

struct dslic_structure {
  dslic::StructureMap rep;
};

struct dslic_bench_result {
  dslic::BenchResult rep;
  std::vector<std::string> failure_messages;
};

namespace {

thread_local std::string last_error;

dslic_status fail(dslic_status status, const std::string& message) {
  last_error = message;
  return status;
}

dslic_status to_status(dslic::ErrorCode code) {
  switch (code) {
    case dslic::ErrorCode::invalid_argument: return DSLIC_ERR_INVALID_ARGUMENT;
    case dslic::ErrorCode::io: return DSLIC_ERR_IO;
    case dslic::ErrorCode::format: return DSLIC_ERR_FORMAT;
    case dslic::ErrorCode::range: return DSLIC_ERR_RANGE;
    case dslic::ErrorCode::dimension: return DSLIC_ERR_DIMENSION;
    case dslic::ErrorCode::empty: return DSLIC_ERR_EMPTY;
  }
  return DSLIC_ERR_INTERNAL;
}

// Runs fn, converting any exception into a status code + message.
template <typename Fn>
dslic_status guarded(Fn&& fn) {
  try {
    fn();
    return DSLIC_OK;
  } catch (const dslic::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DSLIC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DSLIC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DSLIC_ERR_INTERNAL, "unknown error");
  }
}

#define DSLIC_REQUIRE(cond, what) \
  if (!(cond)) return fail(DSLIC_ERR_INVALID_ARGUMENT, what)

dslic::Params to_params(const dslic_params& p) {
  dslic::Params out;
  out.k = p.k;
  out.m = p.m;
  out.max_iters = p.max_iters;
  out.threshold = p.threshold;
  switch (p.algo) {
    case DSLIC_ALGO_SLIC: out.algo = dslic::Algorithm::slic; break;
    case DSLIC_ALGO_DSLIC: out.algo = dslic::Algorithm::dslic; break;
    default: throw dslic::Error(dslic::ErrorCode::invalid_argument, "unknown algorithm");
  }
  switch (p.distance_form) {
    case DSLIC_DISTANCE_PAPER_LITERAL:
      out.distance_form = dslic::DistanceForm::paper_literal;
      break;
    case DSLIC_DISTANCE_CANONICAL:
      out.distance_form = dslic::DistanceForm::canonical;
      break;
    default: throw dslic::Error(dslic::ErrorCode::invalid_argument, "unknown distance form");
  }
  switch (p.radius_scaling) {
    case DSLIC_RADIUS_DIVIDE_BY_G:
      out.radius_scaling = dslic::RadiusScaling::divide_by_g;
      break;
    case DSLIC_RADIUS_MULTIPLY_BY_G:
      out.radius_scaling = dslic::RadiusScaling::multiply_by_g;
      break;
    default: throw dslic::Error(dslic::ErrorCode::invalid_argument, "unknown radius scaling");
  }
  out.sigma = p.sigma;
  out.clamp = p.clamp;
  return out;
}

}  // namespace

extern "C" {

const char* dslic_version(void) { return "0.1.0"; }

const char* dslic_last_error(void) { return last_error.c_str(); }

const char* dslic_status_string(dslic_status status) {
  switch (status) {
    case DSLIC_OK: return "ok";
    case DSLIC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DSLIC_ERR_IO: return "i/o error";
    case DSLIC_ERR_FORMAT: return "unsupported or malformed format";
    case DSLIC_ERR_RANGE: return "value out of range";
    case DSLIC_ERR_DIMENSION: return "dimension mismatch";
    case DSLIC_ERR_EMPTY: return "empty input";
    case DSLIC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void dslic_params_default(dslic_params* params) {
  if (!params) return;
  const dslic::Params d;
  params->k = d.k;
  params->m = d.m;
  params->max_iters = d.max_iters;
  params->threshold = d.threshold;
  params->algo = DSLIC_ALGO_DSLIC;
  params->distance_form = DSLIC_DISTANCE_PAPER_LITERAL;
  params->radius_scaling = DSLIC_RADIUS_DIVIDE_BY_G;
  params->sigma = d.sigma;
  params->clamp = d.clamp;
}

void dslic_overlay_spec_default(dslic_overlay_spec* spec) {
  if (!spec) return;
  const dslic::OverlaySpec d;
  spec->r = d.boundary_color.r;
  spec->g = d.boundary_color.g;
  spec->b = d.boundary_color.b;
  spec->line_width = d.line_width;
}

void dslic_bench_config_default(dslic_bench_config* config) {
  static const int32_t k_values[] = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  static const dslic_algorithm algos[] = {DSLIC_ALGO_SLIC, DSLIC_ALGO_DSLIC};
  if (!config) return;
  *config = dslic_bench_config{};
  config->k_values = k_values;
  config->k_count = std::size(k_values);
  config->algos = algos;
  config->algo_count = std::size(algos);
  dslic_params_default(&config->params);
  config->sample_fraction = 1.0;
}

/* Images */

dslic_status dslic_image_load(const char* path, dslic_image** out) {
  DSLIC_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new dslic_image{dslic::load_image(path)}; });
}

dslic_status dslic_image_from_rgb(int32_t width, int32_t height,
                                  const uint8_t* rgb, dslic_image** out) {
  DSLIC_REQUIRE(rgb && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (width <= 0 || height <= 0)
      throw dslic::Error(dslic::ErrorCode::dimension, "image dimensions must be positive");
    std::vector<dslic::Rgb> px(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < px.size(); ++i)
      px[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
    *out = new dslic_image{dslic::Image::from_rgb(width, height, std::move(px))};
  });
}

void dslic_image_free(dslic_image* image) { delete image; }

int32_t dslic_image_width(const dslic_image* image) {
  return image ? image->rep.width() : 0;
}

int32_t dslic_image_height(const dslic_image* image) {
  return image ? image->rep.height() : 0;
}

dslic_status dslic_image_grey(const dslic_image* image, double* out,
                              size_t count) {
  DSLIC_REQUIRE(image && out, "null argument");
  DSLIC_REQUIRE(count >= image->rep.pixel_count(), "output buffer too small");
  const auto grey = image->rep.grey().values();
  std::copy(grey.begin(), grey.end(), out);
  return DSLIC_OK;
}

dslic_status dslic_image_lab(const dslic_image* image, double* out,
                             size_t count) {
  DSLIC_REQUIRE(image && out, "null argument");
  DSLIC_REQUIRE(count >= 3 * image->rep.pixel_count(), "output buffer too small");
  const auto lab = image->rep.lab().values();
  for (std::size_t i = 0; i < lab.size(); ++i) {
    out[3 * i] = lab[i].l;
    out[3 * i + 1] = lab[i].a;
    out[3 * i + 2] = lab[i].b;
  }
  return DSLIC_OK;
}

/* Label maps */

dslic_status dslic_label_map_load(const char* path, dslic_label_map** out) {
  DSLIC_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new dslic_label_map{dslic::load_label_map(path)}; });
}

dslic_status dslic_label_map_from_data(int32_t width, int32_t height,
                                       const int32_t* labels,
                                       dslic_label_map** out) {
  DSLIC_REQUIRE(labels && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (width <= 0 || height <= 0)
      throw dslic::Error(dslic::ErrorCode::dimension, "label map dimensions must be positive");
    std::vector<std::int32_t> v(labels, labels + static_cast<std::size_t>(width) * height);
    *out = new dslic_label_map{dslic::LabelMap(width, height, std::move(v))};
  });
}

dslic_status dslic_label_map_save(const dslic_label_map* map, const char* path) {
  DSLIC_REQUIRE(map && path, "null argument");
  return guarded([&] { dslic::save_label_map(map->rep, path); });
}

void dslic_label_map_free(dslic_label_map* map) { delete map; }

int32_t dslic_label_map_width(const dslic_label_map* map) {
  return map ? map->rep.width() : 0;
}

int32_t dslic_label_map_height(const dslic_label_map* map) {
  return map ? map->rep.height() : 0;
}

const int32_t* dslic_label_map_data(const dslic_label_map* map) {
  return map ? map->rep.values().data() : nullptr;
}

/* Segmentation */

dslic_status dslic_segment(const dslic_image* image, const dslic_params* params,
                           dslic_segmentation** out) {
  DSLIC_REQUIRE(image && params && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    dslic::Segmentation seg = dslic::segment(image->rep, to_params(*params));
    auto* handle = new dslic_segmentation{std::move(seg), {}};
    handle->labels.rep = handle->rep.labels;
    *out = handle;
  });
}

void dslic_segmentation_free(dslic_segmentation* seg) { delete seg; }

int32_t dslic_segmentation_superpixel_count(const dslic_segmentation* seg) {
  return seg ? static_cast<int32_t>(seg->rep.centers.size()) : 0;
}

int32_t dslic_segmentation_iterations(const dslic_segmentation* seg) {
  return seg ? seg->rep.iterations_run : 0;
}

double dslic_segmentation_residual(const dslic_segmentation* seg) {
  return seg ? seg->rep.residual : 0.0;
}

double dslic_segmentation_grid_interval(const dslic_segmentation* seg) {
  return seg ? seg->rep.grid_interval : 0.0;
}

const dslic_label_map* dslic_segmentation_labels(const dslic_segmentation* seg) {
  return seg ? &seg->labels : nullptr;
}

dslic_status dslic_segmentation_center(const dslic_segmentation* seg,
                                       int32_t index, double out[6]) {
  DSLIC_REQUIRE(seg && out, "null argument");
  if (index < 0 || static_cast<std::size_t>(index) >= seg->rep.centers.size())
    return fail(DSLIC_ERR_RANGE, "centre index out of range");
  const dslic::ClusterFeature& c = seg->rep.centers[index];
  out[0] = c.cx;
  out[1] = c.cy;
  out[2] = c.color.l;
  out[3] = c.color.a;
  out[4] = c.color.b;
  out[5] = static_cast<double>(c.member_count);
  return DSLIC_OK;
}

/* Structure */

dslic_status dslic_structure_compute(const dslic_image* image, double sigma,
                                     double clamp, dslic_structure** out) {
  DSLIC_REQUIRE(image && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new dslic_structure{dslic::compute_structure(image->rep, sigma, clamp)};
  });
}

void dslic_structure_free(dslic_structure* smap) { delete smap; }

double dslic_structure_f_mean(const dslic_structure* smap) {
  return smap ? smap->rep.f_mean : 0.0;
}

#define DSLIC_PLANE_EXTREMUM(name, plane, pick)                        \
  double name(const dslic_structure* smap) {                           \
    if (!smap || smap->rep.plane.empty()) return 0.0;                  \
    const auto v = smap->rep.plane.values();                           \
    return *pick(v.begin(), v.end());                                  \
  }

DSLIC_PLANE_EXTREMUM(dslic_structure_g_min, g, std::min_element)
DSLIC_PLANE_EXTREMUM(dslic_structure_g_max, g, std::max_element)
DSLIC_PLANE_EXTREMUM(dslic_structure_f_min, f, std::min_element)
DSLIC_PLANE_EXTREMUM(dslic_structure_f_max, f, std::max_element)

#undef DSLIC_PLANE_EXTREMUM

dslic_status dslic_structure_save_png(const dslic_structure* smap,
                                      const char* path) {
  DSLIC_REQUIRE(smap && path, "null argument");
  return guarded(
      [&] { dslic::save_grey8_png(dslic::structure_to_grey8(smap->rep), path); });
}

/* Overlay */

dslic_status dslic_overlay_save_png(const dslic_image* image,
                                    const dslic_label_map* labels,
                                    const dslic_overlay_spec* spec,
                                    const char* path) {
  DSLIC_REQUIRE(image && labels && path, "null argument");
  return guarded([&] {
    dslic::OverlaySpec s;
    if (spec) {
      s.boundary_color = {spec->r, spec->g, spec->b};
      s.line_width = spec->line_width;
    }
    dslic::save_rgb_png(dslic::render_overlay(image->rep, labels->rep, s), path);
  });
}

/* Metrics */

dslic_status dslic_metrics(const dslic_label_map* seg, const dslic_label_map* gt,
                           double* undersegmentation_error, double* asa) {
  DSLIC_REQUIRE(seg && gt, "null argument");
  return guarded([&] {
    const double ue = dslic::undersegmentation_error(seg->rep, gt->rep);
    const double acc = dslic::achievable_segmentation_accuracy(seg->rep, gt->rep);
    if (undersegmentation_error) *undersegmentation_error = ue;
    if (asa) *asa = acc;
  });
}

/* Benchmark */

dslic_status dslic_bench_run(const dslic_bench_config* config,
                             dslic_bench_result** out) {
  DSLIC_REQUIRE(config && out && config->dataset_dir, "null argument");
  DSLIC_REQUIRE(config->k_values || config->k_count == 0, "null k_values");
  DSLIC_REQUIRE(config->algos || config->algo_count == 0, "null algos");
  *out = nullptr;
  return guarded([&] {
    dslic::BenchConfig cfg;
    cfg.dataset_dir = config->dataset_dir;
    cfg.k_values.assign(config->k_values, config->k_values + config->k_count);
    dslic_params p = config->params;
    cfg.algos.clear();
    for (std::size_t i = 0; i < config->algo_count; ++i) {
      p.algo = config->algos[i];
      cfg.algos.push_back(to_params(p).algo);
    }
    cfg.params = to_params(config->params);
    cfg.sample_fraction = config->sample_fraction;
    cfg.rng_seed = config->rng_seed;

    auto* result = new dslic_bench_result{dslic::run_benchmark(cfg), {}};
    for (const auto& f : result->rep.failures)
      result->failure_messages.push_back(f.image_id + ": " + f.message);
    *out = result;
  });
}

void dslic_bench_result_free(dslic_bench_result* result) { delete result; }

size_t dslic_bench_result_row_count(const dslic_bench_result* result) {
  return result ? result->rep.rows.size() : 0;
}

size_t dslic_bench_result_failure_count(const dslic_bench_result* result) {
  return result ? result->rep.failures.size() : 0;
}

const char* dslic_bench_result_failure(const dslic_bench_result* result,
                                       size_t index) {
  if (!result || index >= result->failure_messages.size()) return nullptr;
  return result->failure_messages[index].c_str();
}

dslic_status dslic_bench_result_write_csv(const dslic_bench_result* result,
                                          const char* path) {
  DSLIC_REQUIRE(result && path, "null argument");
  return guarded([&] { dslic::write_csv(result->rep, std::filesystem::path(path)); });
}

}  // extern "C"
