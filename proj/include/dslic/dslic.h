/*
 * dslic: superpixel segmentation (SLIC and dynamic-search-range dSLIC) with
 * undersegmentation-error / achievable-segmentation-accuracy evaluation.
 *
 * Plain C interface. Every object is an opaque handle owned by the caller and
 * released with the matching *_free function (NULL is accepted). Functions
 * that can fail return a dslic_status; on failure dslic_last_error() describes
 * the problem for the calling thread until the next failing call.
 */
#ifndef DSLIC_DSLIC_H
#define DSLIC_DSLIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DSLIC_BUILDING_LIBRARY)
#    define DSLIC_API __declspec(dllexport)
#  else
#    define DSLIC_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define DSLIC_API __attribute__((visibility("default")))
#else
#  define DSLIC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dslic_status {
  DSLIC_OK = 0,
  DSLIC_ERR_INVALID_ARGUMENT = 1,
  DSLIC_ERR_IO = 2,
  DSLIC_ERR_FORMAT = 3,
  DSLIC_ERR_RANGE = 4,
  DSLIC_ERR_DIMENSION = 5,
  DSLIC_ERR_EMPTY = 6,
  DSLIC_ERR_INTERNAL = 7
} dslic_status;

typedef enum dslic_algorithm {
  DSLIC_ALGO_SLIC = 0,
  DSLIC_ALGO_DSLIC = 1
} dslic_algorithm;

typedef enum dslic_distance_form {
  DSLIC_DISTANCE_PAPER_LITERAL = 0,
  DSLIC_DISTANCE_CANONICAL = 1
} dslic_distance_form;

typedef enum dslic_radius_scaling {
  DSLIC_RADIUS_DIVIDE_BY_G = 0, /* 2S / g: wider windows in uniform areas */
  DSLIC_RADIUS_MULTIPLY_BY_G = 1 /* 2S * g */
} dslic_radius_scaling;

typedef struct dslic_image dslic_image;
typedef struct dslic_label_map dslic_label_map;
typedef struct dslic_segmentation dslic_segmentation;
typedef struct dslic_structure dslic_structure;
typedef struct dslic_bench_result dslic_bench_result;

typedef struct dslic_params {
  int32_t k;
  double m;
  int32_t max_iters;
  double threshold;
  dslic_algorithm algo;
  dslic_distance_form distance_form;
  dslic_radius_scaling radius_scaling;
  double sigma;
  double clamp;
} dslic_params;

typedef struct dslic_overlay_spec {
  uint8_t r, g, b;
  int32_t line_width;
} dslic_overlay_spec;

typedef struct dslic_bench_config {
  const char* dataset_dir;
  const int32_t* k_values;
  size_t k_count;
  const dslic_algorithm* algos;
  size_t algo_count;
  dslic_params params;
  double sample_fraction;
  uint64_t rng_seed;
} dslic_bench_config;

/* Library-wide ------------------------------------------------------------ */

DSLIC_API const char* dslic_version(void);
DSLIC_API const char* dslic_last_error(void);
DSLIC_API const char* dslic_status_string(dslic_status status);

/* Fills defaults: k=400, m=20, max_iters=10, threshold=0, dSLIC,
 * paper-literal distance, 2S/g windows, sigma=20, clamp=2/255. */
DSLIC_API void dslic_params_default(dslic_params* params);
DSLIC_API void dslic_overlay_spec_default(dslic_overlay_spec* spec);
/* k = 100..1000 step 100, both algorithms, full dataset; arrays are static. */
DSLIC_API void dslic_bench_config_default(dslic_bench_config* config);

/* Images -------------------------------------------------------------------- */

DSLIC_API dslic_status dslic_image_load(const char* path, dslic_image** out);
/* rgb holds width*height interleaved R,G,B bytes, row-major. */
DSLIC_API dslic_status dslic_image_from_rgb(int32_t width, int32_t height,
                                            const uint8_t* rgb,
                                            dslic_image** out);
DSLIC_API void dslic_image_free(dslic_image* image);
DSLIC_API int32_t dslic_image_width(const dslic_image* image);
DSLIC_API int32_t dslic_image_height(const dslic_image* image);
/* Copies width*height greyscale values in [0,1] into out. */
DSLIC_API dslic_status dslic_image_grey(const dslic_image* image, double* out,
                                        size_t count);
/* Copies width*height L,a,b triples into out (3*width*height doubles). */
DSLIC_API dslic_status dslic_image_lab(const dslic_image* image, double* out,
                                       size_t count);

/* Label maps ---------------------------------------------------------------- */

DSLIC_API dslic_status dslic_label_map_load(const char* path,
                                            dslic_label_map** out);
DSLIC_API dslic_status dslic_label_map_from_data(int32_t width, int32_t height,
                                                 const int32_t* labels,
                                                 dslic_label_map** out);
DSLIC_API dslic_status dslic_label_map_save(const dslic_label_map* map,
                                            const char* path);
DSLIC_API void dslic_label_map_free(dslic_label_map* map);
DSLIC_API int32_t dslic_label_map_width(const dslic_label_map* map);
DSLIC_API int32_t dslic_label_map_height(const dslic_label_map* map);
/* Borrowed pointer to width*height labels; valid until the map is freed. */
DSLIC_API const int32_t* dslic_label_map_data(const dslic_label_map* map);

/* Segmentation ---------------------------------------------------------------- */

DSLIC_API dslic_status dslic_segment(const dslic_image* image,
                                     const dslic_params* params,
                                     dslic_segmentation** out);
DSLIC_API void dslic_segmentation_free(dslic_segmentation* seg);
DSLIC_API int32_t dslic_segmentation_superpixel_count(
    const dslic_segmentation* seg);
DSLIC_API int32_t dslic_segmentation_iterations(const dslic_segmentation* seg);
DSLIC_API double dslic_segmentation_residual(const dslic_segmentation* seg);
DSLIC_API double dslic_segmentation_grid_interval(const dslic_segmentation* seg);
/* Borrowed view of the label map; valid until the segmentation is freed. */
DSLIC_API const dslic_label_map* dslic_segmentation_labels(
    const dslic_segmentation* seg);
/* Centre i as (cx, cy, L, a, b, member_count). */
DSLIC_API dslic_status dslic_segmentation_center(const dslic_segmentation* seg,
                                                 int32_t index, double out[6]);

/* Structure measure ------------------------------------------------------------ */

DSLIC_API dslic_status dslic_structure_compute(const dslic_image* image,
                                               double sigma, double clamp,
                                               dslic_structure** out);
DSLIC_API void dslic_structure_free(dslic_structure* smap);
DSLIC_API double dslic_structure_f_mean(const dslic_structure* smap);
DSLIC_API double dslic_structure_g_min(const dslic_structure* smap);
DSLIC_API double dslic_structure_g_max(const dslic_structure* smap);
DSLIC_API double dslic_structure_f_min(const dslic_structure* smap);
DSLIC_API double dslic_structure_f_max(const dslic_structure* smap);
/* Writes f as 8-bit greyscale PNG (round(f * 255)). */
DSLIC_API dslic_status dslic_structure_save_png(const dslic_structure* smap,
                                                const char* path);

/* Overlay --------------------------------------------------------------------- */

DSLIC_API dslic_status dslic_overlay_save_png(const dslic_image* image,
                                              const dslic_label_map* labels,
                                              const dslic_overlay_spec* spec,
                                              const char* path);

/* Metrics --------------------------------------------------------------------- */

DSLIC_API dslic_status dslic_metrics(const dslic_label_map* seg,
                                     const dslic_label_map* gt,
                                     double* undersegmentation_error,
                                     double* asa);

/* Benchmark ------------------------------------------------------------------- */

DSLIC_API dslic_status dslic_bench_run(const dslic_bench_config* config,
                                       dslic_bench_result** out);
DSLIC_API void dslic_bench_result_free(dslic_bench_result* result);
DSLIC_API size_t dslic_bench_result_row_count(const dslic_bench_result* result);
DSLIC_API size_t dslic_bench_result_failure_count(
    const dslic_bench_result* result);
/* Message for failure i ("<image_id>: <reason>"); NULL when out of range. */
DSLIC_API const char* dslic_bench_result_failure(
    const dslic_bench_result* result, size_t index);
DSLIC_API dslic_status dslic_bench_result_write_csv(
    const dslic_bench_result* result, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* DSLIC_DSLIC_H */
