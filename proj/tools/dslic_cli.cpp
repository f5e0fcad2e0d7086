// dslic command-line front end: segment | structure | metrics | bench.
//
// Exit codes: 0 success, 1 I/O or processing failure, 2 bad flags.

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dslic/dslic.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ImagePtr = std::unique_ptr<dslic_image, Deleter<dslic_image, dslic_image_free>>;
using LabelMapPtr =
    std::unique_ptr<dslic_label_map, Deleter<dslic_label_map, dslic_label_map_free>>;
using SegmentationPtr =
    std::unique_ptr<dslic_segmentation,
                    Deleter<dslic_segmentation, dslic_segmentation_free>>;
using StructurePtr =
    std::unique_ptr<dslic_structure, Deleter<dslic_structure, dslic_structure_free>>;
using BenchResultPtr =
    std::unique_ptr<dslic_bench_result,
                    Deleter<dslic_bench_result, dslic_bench_result_free>>;

// Carries a failing library call out to main().
struct Failure {
  std::string message;
};

void check(dslic_status status, const std::string& context) {
  if (status != DSLIC_OK)
    throw Failure{context + ": " + dslic_last_error()};
}

const std::map<std::string, dslic_algorithm> kAlgos{
    {"slic", DSLIC_ALGO_SLIC}, {"dslic", DSLIC_ALGO_DSLIC}};
const std::map<std::string, dslic_distance_form> kForms{
    {"paper", DSLIC_DISTANCE_PAPER_LITERAL},
    {"canonical", DSLIC_DISTANCE_CANONICAL}};
const std::map<std::string, dslic_radius_scaling> kRadii{
    {"divide", DSLIC_RADIUS_DIVIDE_BY_G},
    {"multiply", DSLIC_RADIUS_MULTIPLY_BY_G}};

struct SegmentArgs {
  std::string input, labels, overlay;
  dslic_params params{};
};

struct StructureArgs {
  std::string input, out;
  double sigma = 20.0;
  double clamp = 2.0 / 255.0;
};

struct MetricsArgs {
  std::string labels, gt;
};

struct BenchArgs {
  std::string dataset, out;
  std::vector<int> k_values;
  std::vector<dslic_algorithm> algos{DSLIC_ALGO_SLIC, DSLIC_ALGO_DSLIC};
  double sample = 0.15;
  std::uint64_t seed = 0;
  dslic_params params{};
};

void add_tuning_flags(CLI::App* cmd, dslic_params& p) {
  cmd->add_option("--m", p.m, "compactness weight")
      ->default_val(20.0)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", p.sigma, "structure blur std-dev in pixels")
      ->default_val(20.0)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--clamp", p.clamp, "gradient clamp level (default 0.00784 ~ 2/255)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iters", p.max_iters, "maximum iterations")
      ->default_val(10)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", p.threshold, "residual stop level")
      ->default_val(0.0)
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--distance", p.distance_form, "paper|canonical")
      ->transform(CLI::CheckedTransformer(kForms, CLI::ignore_case))
      ->default_str("paper");
  cmd->add_option("--radius", p.radius_scaling,
                  "dslic window: divide (2S/g) or multiply (2S*g)")
      ->transform(CLI::CheckedTransformer(kRadii, CLI::ignore_case))
      ->default_str("divide");
}

int run_segment(const SegmentArgs& a) {
  dslic_image* raw_image = nullptr;
  check(dslic_image_load(a.input.c_str(), &raw_image), "cannot load image");
  ImagePtr image(raw_image);

  dslic_segmentation* raw_seg = nullptr;
  const auto t0 = std::chrono::steady_clock::now();
  check(dslic_segment(image.get(), &a.params, &raw_seg), "segmentation failed");
  const auto t1 = std::chrono::steady_clock::now();
  SegmentationPtr seg(raw_seg);

  const dslic_label_map* labels = dslic_segmentation_labels(seg.get());
  check(dslic_label_map_save(labels, a.labels.c_str()), "cannot write labels");
  if (!a.overlay.empty()) {
    dslic_overlay_spec spec;
    dslic_overlay_spec_default(&spec);
    check(dslic_overlay_save_png(image.get(), labels, &spec, a.overlay.c_str()),
          "cannot write overlay");
  }

  std::printf("superpixels=%d iterations=%d residual=%.6f runtime_ms=%.3f\n",
              dslic_segmentation_superpixel_count(seg.get()),
              dslic_segmentation_iterations(seg.get()),
              dslic_segmentation_residual(seg.get()),
              std::chrono::duration<double, std::milli>(t1 - t0).count());
  return 0;
}

int run_structure(const StructureArgs& a) {
  dslic_image* raw_image = nullptr;
  check(dslic_image_load(a.input.c_str(), &raw_image), "cannot load image");
  ImagePtr image(raw_image);

  dslic_structure* raw = nullptr;
  check(dslic_structure_compute(image.get(), a.sigma, a.clamp, &raw),
        "structure measure failed");
  StructurePtr smap(raw);
  check(dslic_structure_save_png(smap.get(), a.out.c_str()), "cannot write f map");
  std::printf("f_mean=%.6f g_min=%.6f g_max=%.6f\n",
              dslic_structure_f_mean(smap.get()), dslic_structure_g_min(smap.get()),
              dslic_structure_g_max(smap.get()));
  return 0;
}

int run_metrics(const MetricsArgs& a) {
  dslic_label_map* raw_seg = nullptr;
  dslic_label_map* raw_gt = nullptr;
  check(dslic_label_map_load(a.labels.c_str(), &raw_seg), "cannot load labels");
  LabelMapPtr seg(raw_seg);
  check(dslic_label_map_load(a.gt.c_str(), &raw_gt), "cannot load ground truth");
  LabelMapPtr gt(raw_gt);

  double ue = 0.0, asa = 0.0;
  check(dslic_metrics(seg.get(), gt.get(), &ue, &asa), "metrics failed");
  std::printf("ue=%.6f asa=%.6f\n", ue, asa);
  return 0;
}

int run_bench(const BenchArgs& a) {
  dslic_bench_config cfg;
  dslic_bench_config_default(&cfg);
  cfg.dataset_dir = a.dataset.c_str();
  std::vector<int32_t> ks(a.k_values.begin(), a.k_values.end());
  cfg.k_values = ks.data();
  cfg.k_count = ks.size();
  cfg.algos = a.algos.data();
  cfg.algo_count = a.algos.size();
  cfg.params = a.params;
  cfg.sample_fraction = a.sample;
  cfg.rng_seed = a.seed;

  dslic_bench_result* raw = nullptr;
  check(dslic_bench_run(&cfg, &raw), "benchmark failed");
  BenchResultPtr result(raw);

  const std::size_t failures = dslic_bench_result_failure_count(result.get());
  for (std::size_t i = 0; i < failures; ++i)
    std::fprintf(stderr, "failed: %s\n", dslic_bench_result_failure(result.get(), i));
  if (dslic_bench_result_row_count(result.get()) == 0)
    throw Failure{"every image failed"};
  check(dslic_bench_result_write_csv(result.get(), a.out.c_str()), "cannot write CSV");
  std::printf("rows=%zu failures=%zu\n", dslic_bench_result_row_count(result.get()),
              failures);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dslic: SLIC / dSLIC superpixels and evaluation"};
  app.require_subcommand(1);

  SegmentArgs seg;
  dslic_params_default(&seg.params);
  auto* segment = app.add_subcommand("segment", "segment an image into superpixels");
  segment->add_option("--input", seg.input, "PNG/PPM/PGM image")->required();
  segment->add_option("--algo", seg.params.algo, "slic|dslic")
      ->transform(CLI::CheckedTransformer(kAlgos, CLI::ignore_case))
      ->default_str("dslic");
  segment->add_option("--k", seg.params.k, "requested superpixel count")
      ->required()
      ->check(CLI::PositiveNumber);
  add_tuning_flags(segment, seg.params);
  segment->add_option("--labels", seg.labels, "output 16-bit label PNG")->required();
  segment->add_option("--overlay", seg.overlay, "output boundary overlay PNG");

  StructureArgs st;
  auto* structure = app.add_subcommand("structure", "export the structure measure f");
  structure->add_option("--input", st.input, "PNG/PPM/PGM image")->required();
  structure->add_option("--sigma", st.sigma, "blur std-dev in pixels")
      ->default_val(20.0)
      ->check(CLI::PositiveNumber);
  structure->add_option("--clamp", st.clamp, "gradient clamp level (default 0.00784 ~ 2/255)")
      ->check(CLI::PositiveNumber);
  structure->add_option("--out", st.out, "output 8-bit PNG of f")->required();

  MetricsArgs me;
  auto* metrics = app.add_subcommand("metrics", "score a label map against ground truth");
  metrics->add_option("--labels", me.labels, "superpixel label PNG")->required();
  metrics->add_option("--gt", me.gt, "ground-truth label PNG")->required();

  BenchArgs be;
  dslic_params_default(&be.params);
  auto* bench = app.add_subcommand("bench", "run a dataset benchmark");
  bench->add_option("--dataset", be.dataset, "directory of <id>.png + <id>.gt.png")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--k", be.k_values, "comma-separated superpixel counts")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--algos", be.algos, "comma-separated subset of slic,dslic")
      ->delimiter(',')
      ->transform(CLI::CheckedTransformer(kAlgos, CLI::ignore_case));
  bench->add_option("--sample", be.sample, "fraction of images to use")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--seed", be.seed, "sampling seed");
  add_tuning_flags(bench, be.params);
  bench->add_option("--out", be.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (be.sample <= 0.0) {
    std::fprintf(stderr, "--sample must be > 0\n");
    return kExitUsage;
  }

  try {
    if (*segment) return run_segment(seg);
    if (*structure) return run_structure(st);
    if (*metrics) return run_metrics(me);
    if (*bench) return run_bench(be);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return kExitFailure;
  }
  return kExitUsage;
}
