#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "dslic/dslic.h"
#include "support/scratch.hpp"
#include "support/synth.hpp"

using testsupport::ScratchDir;

namespace {

dslic_image* make_image(const synth::RawImage& raw) {
  dslic_image* img = nullptr;
  REQUIRE(dslic_image_from_rgb(raw.width, raw.height, raw.rgb.data(), &img) == DSLIC_OK);
  return img;
}

dslic_label_map* make_labels(const synth::RawLabels& raw) {
  dslic_label_map* m = nullptr;
  REQUIRE(dslic_label_map_from_data(raw.width, raw.height, raw.labels.data(), &m) == DSLIC_OK);
  return m;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(dslic_version()) == "0.1.0");
  CHECK(std::string(dslic_status_string(DSLIC_OK)) == "ok");
  CHECK(std::string(dslic_status_string(DSLIC_ERR_IO)) == "i/o error");
  CHECK(std::string(dslic_status_string(static_cast<dslic_status>(99))) == "unknown status");
}

TEST_CASE("defaults") {
  dslic_params p;
  std::memset(&p, 0xff, sizeof p);
  dslic_params_default(&p);
  CHECK(p.k == 400);
  CHECK(p.m == 20.0);
  CHECK(p.max_iters == 10);
  CHECK(p.threshold == 0.0);
  CHECK(p.algo == DSLIC_ALGO_DSLIC);
  CHECK(p.distance_form == DSLIC_DISTANCE_PAPER_LITERAL);
  CHECK(p.radius_scaling == DSLIC_RADIUS_DIVIDE_BY_G);
  CHECK(p.sigma == 20.0);
  CHECK(p.clamp == doctest::Approx(2.0 / 255.0));
  dslic_params_default(nullptr);

  dslic_overlay_spec o;
  dslic_overlay_spec_default(&o);
  CHECK(o.r == 255);
  CHECK(o.g == 255);
  CHECK(o.b == 0);
  CHECK(o.line_width == 1);

  dslic_bench_config c;
  dslic_bench_config_default(&c);
  CHECK(c.k_count == 10);
  CHECK(c.k_values[0] == 100);
  CHECK(c.k_values[9] == 1000);
  CHECK(c.algo_count == 2);
  CHECK(c.sample_fraction == 1.0);
}

TEST_CASE("image handles") {
  const auto raw = synth::random_rgb(5, 3, 1);
  dslic_image* img = make_image(raw);
  CHECK(dslic_image_width(img) == 5);
  CHECK(dslic_image_height(img) == 3);

  std::vector<double> grey(15), lab(45);
  CHECK(dslic_image_grey(img, grey.data(), grey.size()) == DSLIC_OK);
  const double want = (0.299 * raw.rgb[0] + 0.587 * raw.rgb[1] + 0.114 * raw.rgb[2]) / 255.0;
  CHECK(grey[0] == doctest::Approx(want));
  CHECK(dslic_image_lab(img, lab.data(), lab.size()) == DSLIC_OK);
  CHECK(lab[0] >= 0.0);
  CHECK(lab[0] <= 100.0);
  CHECK(dslic_image_grey(img, grey.data(), 3) == DSLIC_ERR_INVALID_ARGUMENT);
  CHECK(dslic_image_lab(img, lab.data(), 15) == DSLIC_ERR_INVALID_ARGUMENT);
  dslic_image_free(img);
  dslic_image_free(nullptr);

  CHECK(dslic_image_width(nullptr) == 0);
  dslic_image* out = reinterpret_cast<dslic_image*>(0x1);
  CHECK(dslic_image_from_rgb(0, 3, raw.rgb.data(), &out) != DSLIC_OK);
  CHECK(out == nullptr);
  CHECK(dslic_image_from_rgb(5, 3, nullptr, &out) == DSLIC_ERR_INVALID_ARGUMENT);
  CHECK(dslic_image_from_rgb(5, 3, raw.rgb.data(), nullptr) == DSLIC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("errors set the thread's last error") {
  dslic_image* img = nullptr;
  CHECK(dslic_image_load("/nonexistent/x.png", &img) == DSLIC_ERR_IO);
  CHECK(img == nullptr);
  CHECK(std::string(dslic_last_error()).find("/nonexistent/x.png") != std::string::npos);
  CHECK(dslic_image_load(nullptr, &img) == DSLIC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(dslic_last_error()).size() > 0);
}

TEST_CASE("label maps") {
  ScratchDir dir("capi_labels");
  const auto raw = synth::random_labels(6, 4, 700, 3);
  dslic_label_map* m = make_labels(raw);
  CHECK(dslic_label_map_width(m) == 6);
  CHECK(dslic_label_map_height(m) == 4);
  CHECK(std::memcmp(dslic_label_map_data(m), raw.labels.data(), 24 * sizeof(int32_t)) == 0);

  const std::string path = (dir / "m.png").string();
  CHECK(dslic_label_map_save(m, path.c_str()) == DSLIC_OK);
  dslic_label_map* back = nullptr;
  CHECK(dslic_label_map_load(path.c_str(), &back) == DSLIC_OK);
  CHECK(std::memcmp(dslic_label_map_data(back), raw.labels.data(), 24 * sizeof(int32_t)) == 0);
  dslic_label_map_free(back);
  dslic_label_map_free(m);

  std::vector<int32_t> big{0, 70000};
  dslic_label_map* wide = nullptr;
  REQUIRE(dslic_label_map_from_data(2, 1, big.data(), &wide) == DSLIC_OK);
  CHECK(dslic_label_map_save(wide, path.c_str()) == DSLIC_ERR_RANGE);
  dslic_label_map_free(wide);
  CHECK(dslic_label_map_data(nullptr) == nullptr);
}

TEST_CASE("segmentation through the C API") {
  const auto scene = synth::cluttered_scene(60, 40, 2);
  dslic_image* img = make_image(scene.image);
  dslic_params p;
  dslic_params_default(&p);
  p.k = 24;

  dslic_segmentation* seg = nullptr;
  REQUIRE(dslic_segment(img, &p, &seg) == DSLIC_OK);
  const int32_t n = dslic_segmentation_superpixel_count(seg);
  CHECK(n > 0);
  CHECK(dslic_segmentation_iterations(seg) == 10);
  CHECK(dslic_segmentation_grid_interval(seg) == doctest::Approx(std::sqrt(60.0 * 40 / 24)));
  CHECK(dslic_segmentation_residual(seg) >= 0.0);

  const dslic_label_map* labels = dslic_segmentation_labels(seg);
  REQUIRE(labels != nullptr);
  CHECK(dslic_label_map_width(labels) == 60);
  const int32_t* data = dslic_label_map_data(labels);
  std::vector<long> members(n, 0);
  for (int i = 0; i < 60 * 40; ++i) {
    REQUIRE(data[i] >= 0);
    REQUIRE(data[i] < n);
    ++members[data[i]];
  }
  double c[6];
  for (int32_t i = 0; i < n; ++i) {
    REQUIRE(dslic_segmentation_center(seg, i, c) == DSLIC_OK);
    CHECK(c[5] == members[i]);
  }
  CHECK(dslic_segmentation_center(seg, n, c) == DSLIC_ERR_RANGE);
  CHECK(dslic_segmentation_center(seg, -1, c) == DSLIC_ERR_RANGE);

  // Same inputs, same labels.
  dslic_segmentation* again = nullptr;
  REQUIRE(dslic_segment(img, &p, &again) == DSLIC_OK);
  CHECK(std::memcmp(dslic_label_map_data(dslic_segmentation_labels(again)), data,
                    60 * 40 * sizeof(int32_t)) == 0);
  dslic_segmentation_free(again);
  dslic_segmentation_free(seg);

  p.k = 0;
  CHECK(dslic_segment(img, &p, &seg) == DSLIC_ERR_INVALID_ARGUMENT);
  CHECK(seg == nullptr);
  dslic_params_default(&p);
  p.radius_scaling = static_cast<dslic_radius_scaling>(7);
  CHECK(dslic_segment(img, &p, &seg) == DSLIC_ERR_INVALID_ARGUMENT);
  p.radius_scaling = DSLIC_RADIUS_MULTIPLY_BY_G;
  p.k = 24;
  REQUIRE(dslic_segment(img, &p, &seg) == DSLIC_OK);
  dslic_segmentation_free(seg);
  CHECK(dslic_segment(nullptr, &p, &seg) == DSLIC_ERR_INVALID_ARGUMENT);
  CHECK(dslic_segment(img, nullptr, &seg) == DSLIC_ERR_INVALID_ARGUMENT);
  dslic_image_free(img);
}

TEST_CASE("structure measure") {
  ScratchDir dir("capi_structure");
  dslic_image* flat = make_image(synth::blank(20, 20, 9, 9, 9));
  dslic_structure* s = nullptr;
  REQUIRE(dslic_structure_compute(flat, 20.0, 2.0 / 255.0, &s) == DSLIC_OK);
  CHECK(dslic_structure_f_mean(s) == 0.0);
  CHECK(dslic_structure_g_min(s) == 1.0);
  CHECK(dslic_structure_g_max(s) == 1.0);
  dslic_structure_free(s);
  dslic_image_free(flat);

  dslic_image* noisy = make_image(synth::half_noise(40, 20, 1));
  REQUIRE(dslic_structure_compute(noisy, 4.0, 2.0 / 255.0, &s) == DSLIC_OK);
  CHECK(dslic_structure_f_max(s) == 1.0);
  CHECK(dslic_structure_f_min(s) >= 0.0);
  CHECK(dslic_structure_g_max(s) / dslic_structure_g_min(s) ==
        doctest::Approx(std::exp(dslic_structure_f_max(s) - dslic_structure_f_min(s))));
  const std::string path = (dir / "f.png").string();
  CHECK(dslic_structure_save_png(s, path.c_str()) == DSLIC_OK);
  dslic_image* back = nullptr;
  CHECK(dslic_image_load(path.c_str(), &back) == DSLIC_OK);
  CHECK(dslic_image_width(back) == 40);
  dslic_image_free(back);
  dslic_structure_free(s);

  CHECK(dslic_structure_compute(noisy, -1.0, 0.1, &s) == DSLIC_ERR_INVALID_ARGUMENT);
  dslic_image_free(noisy);
}

TEST_CASE("metrics and overlay") {
  ScratchDir dir("capi_metrics");
  synth::RawLabels seg_raw{10, 1, std::vector<int32_t>(10, 0)};
  synth::RawLabels gt_raw{10, 1, {0, 0, 0, 0, 0, 0, 0, 1, 1, 1}};
  dslic_label_map* seg = make_labels(seg_raw);
  dslic_label_map* gt = make_labels(gt_raw);
  double ue = -1, asa = -1;
  CHECK(dslic_metrics(seg, gt, &ue, &asa) == DSLIC_OK);
  CHECK(ue == doctest::Approx(0.6));
  CHECK(asa == doctest::Approx(0.7));
  CHECK(dslic_metrics(seg, gt, nullptr, &asa) == DSLIC_OK);

  dslic_label_map* other = make_labels(synth::RawLabels{5, 2, std::vector<int32_t>(10, 0)});
  CHECK(dslic_metrics(seg, other, &ue, &asa) == DSLIC_ERR_DIMENSION);

  dslic_image* img = make_image(synth::blank(10, 1, 0, 0, 0));
  dslic_overlay_spec spec;
  dslic_overlay_spec_default(&spec);
  const std::string path = (dir / "o.png").string();
  CHECK(dslic_overlay_save_png(img, gt, &spec, path.c_str()) == DSLIC_OK);
  dslic_image* out = nullptr;
  REQUIRE(dslic_image_load(path.c_str(), &out) == DSLIC_OK);
  std::vector<double> grey(10);
  REQUIRE(dslic_image_grey(out, grey.data(), 10) == DSLIC_OK);
  for (int x = 0; x < 10; ++x) CHECK((grey[x] > 0.5) == (x == 6 || x == 7));
  CHECK(dslic_overlay_save_png(img, other, &spec, path.c_str()) == DSLIC_ERR_DIMENSION);
  CHECK(dslic_overlay_save_png(img, gt, nullptr, path.c_str()) == DSLIC_OK);

  dslic_image_free(out);
  dslic_image_free(img);
  dslic_label_map_free(other);
  dslic_label_map_free(gt);
  dslic_label_map_free(seg);
}

TEST_CASE("benchmark through the C API") {
  ScratchDir dir("capi_bench");
  for (int i = 0; i < 2; ++i) {
    const auto scene = synth::cluttered_scene(40, 30, 30 + i);
    dslic_image* img = make_image(scene.image);
    dslic_label_map* gt = make_labels(scene.truth);
    const std::string id = "c" + std::to_string(i);
    dslic_segmentation* seg = nullptr;
    dslic_params p;
    dslic_params_default(&p);
    p.k = 1;  // one superpixel draws no boundary, so the overlay is the image itself
    REQUIRE(dslic_segment(img, &p, &seg) == DSLIC_OK);
    dslic_overlay_spec spec;
    dslic_overlay_spec_default(&spec);
    REQUIRE(dslic_overlay_save_png(img, dslic_segmentation_labels(seg), &spec,
                                   (dir / (id + ".png")).string().c_str()) == DSLIC_OK);
    REQUIRE(dslic_label_map_save(gt, (dir / (id + ".gt.png")).string().c_str()) == DSLIC_OK);
    dslic_segmentation_free(seg);
    dslic_label_map_free(gt);
    dslic_image_free(img);
  }

  dslic_bench_config cfg;
  dslic_bench_config_default(&cfg);
  const std::string ds = dir.path().string();
  const int32_t ks[] = {8, 16};
  cfg.dataset_dir = ds.c_str();
  cfg.k_values = ks;
  cfg.k_count = 2;
  dslic_bench_result* r = nullptr;
  REQUIRE(dslic_bench_run(&cfg, &r) == DSLIC_OK);
  CHECK(dslic_bench_result_row_count(r) == 8);
  CHECK(dslic_bench_result_failure_count(r) == 0);
  CHECK(dslic_bench_result_failure(r, 0) == nullptr);
  const std::string csv = (dir / "out.csv").string();
  CHECK(dslic_bench_result_write_csv(r, csv.c_str()) == DSLIC_OK);
  CHECK(std::filesystem::file_size(csv) > 0);
  dslic_bench_result_free(r);

  cfg.k_count = 0;
  CHECK(dslic_bench_run(&cfg, &r) == DSLIC_ERR_INVALID_ARGUMENT);
  dslic_bench_config_default(&cfg);
  cfg.dataset_dir = "/nonexistent";
  CHECK(dslic_bench_run(&cfg, &r) == DSLIC_ERR_IO);
}
