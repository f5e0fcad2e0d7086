#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dslic/clustering.hpp"
#include "dslic/metrics.hpp"

namespace dslic {

struct DatasetEntry {
  std::filesystem::path image;
  std::filesystem::path ground_truth;
  std::string id;
};

/// Pairs `<id>.png|ppm|pgm` with `<id>.gt.png`, sorted by id. Images without
/// ground truth are skipped with a warning on stderr.
std::vector<DatasetEntry> discover_dataset(const std::filesystem::path& dir);

/// Deterministic subset of max(1, round(fraction * n)) entries, returned in
/// id order.
std::vector<DatasetEntry> sample_dataset(std::vector<DatasetEntry> entries,
                                         double fraction, std::uint64_t seed);

struct BenchConfig {
  std::filesystem::path dataset_dir;
  std::vector<int> k_values{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  std::vector<Algorithm> algos{Algorithm::slic, Algorithm::dslic};
  Params params;
  double sample_fraction = 1.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct AggregateRow {
  Algorithm algo = Algorithm::slic;
  int k = 0;
  int images = 0;
  double superpixel_count = 0.0;
  double undersegmentation_error = 0.0;
  double asa = 0.0;
  double runtime_ms = 0.0;
};

struct BenchFailure {
  std::string image_id;
  std::string message;
};

struct BenchResult {
  /// Sorted by (image_id, algo, k).
  std::vector<MetricsReport> rows;
  /// Per-(algo, k) means over `rows`, sorted by (algo, k).
  std::vector<AggregateRow> aggregates;
  std::vector<BenchFailure> failures;
};

/// Segments every sampled image for each k and algorithm and scores it. Only
/// the segment() call is timed. Per-image failures land in `failures`.
BenchResult run_benchmark(const BenchConfig& config);

/// Header `image_id,algo,k,superpixel_count,ue,asa,runtime_ms`; aggregate rows
/// use image_id `MEAN`.
void write_csv(const BenchResult& result, std::ostream& out);
void write_csv(const BenchResult& result, const std::filesystem::path& path);

}  // namespace dslic
