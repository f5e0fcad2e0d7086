#include "dslic/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <tuple>

#include "dslic/error.hpp"
#include "dslic/imageio.hpp"

namespace fs = std::filesystem;

namespace dslic {
namespace {

constexpr const char* kGroundTruthSuffix = ".gt.png";

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_image_name(const std::string& name) {
  if (ends_with(name, kGroundTruthSuffix)) return false;
  return ends_with(name, ".png") || ends_with(name, ".ppm") ||
         ends_with(name, ".pgm");
}

void write_row(std::ostream& out, const std::string& id, Algorithm algo, int k,
               const std::string& count, double ue, double asa, double ms) {
  char buf[160];
  std::snprintf(buf, sizeof buf, ",%s,%d,%s,%.6f,%.6f,%.6f\n", to_string(algo),
                k, count.c_str(), ue, asa, ms);
  out << id << buf;
}

}  // namespace

std::vector<DatasetEntry> discover_dataset(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error(ErrorCode::io, "'" + dir.string() + "' is not a readable directory");

  std::vector<DatasetEntry> entries;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot list '" + dir.string() + "': " + ec.message());
  for (const fs::directory_entry& e : it) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    if (!is_image_name(name)) continue;
    const std::string id = e.path().stem().string();
    const fs::path gt = dir / (id + kGroundTruthSuffix);
    if (!fs::exists(gt)) {
      std::cerr << "warning: no ground truth for '" << name << "', skipped\n";
      continue;
    }
    entries.push_back({e.path(), gt, id});
  }
  if (entries.empty())
    throw Error(ErrorCode::empty, "no (image, ground truth) pairs in '" + dir.string() + "'");
  std::sort(entries.begin(), entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) {
              return std::tie(a.id, a.image) < std::tie(b.id, b.image);
            });
  return entries;
}

std::vector<DatasetEntry> sample_dataset(std::vector<DatasetEntry> entries,
                                         double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw Error(ErrorCode::invalid_argument, "sample fraction must be in (0, 1]");
  if (entries.empty()) return entries;
  const std::size_t n = entries.size();
  const std::size_t take = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * n)), 1, n);
  if (take == n) return entries;

  // Hand-rolled shuffle: std distributions differ between standard libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(entries[i], entries[rng() % (i + 1)]);
  entries.resize(take);
  std::sort(entries.begin(), entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
  return entries;
}

void BenchConfig::validate() const {
  if (k_values.empty())
    throw Error(ErrorCode::invalid_argument, "at least one k value required");
  for (int k : k_values)
    if (k < 1) throw Error(ErrorCode::invalid_argument, "k values must be positive");
  if (algos.empty())
    throw Error(ErrorCode::invalid_argument, "at least one algorithm required");
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
    throw Error(ErrorCode::invalid_argument, "sample fraction must be in (0, 1]");
  Params p = params;
  p.k = k_values.front();
  p.validate();
}

BenchResult run_benchmark(const BenchConfig& config) {
  config.validate();
  const auto entries = sample_dataset(discover_dataset(config.dataset_dir),
                                      config.sample_fraction, config.rng_seed);

  BenchResult result;
  for (const DatasetEntry& entry : entries) {
    try {
      const Image image = load_image(entry.image);
      const LabelMap gt = load_label_map(entry.ground_truth);
      if (gt.width() != image.width() || gt.height() != image.height())
        throw Error(ErrorCode::dimension, "ground truth size differs from image");

      std::vector<MetricsReport> rows;
      for (Algorithm algo : config.algos) {
        for (int k : config.k_values) {
          Params p = config.params;
          p.k = k;
          p.algo = algo;
          const auto t0 = std::chrono::steady_clock::now();
          const Segmentation seg = segment(image, p);
          const auto t1 = std::chrono::steady_clock::now();

          MetricsReport r;
          r.image_id = entry.id;
          r.algo = algo;
          r.k = k;
          r.superpixel_count = static_cast<int>(seg.centers.size());
          r.undersegmentation_error = undersegmentation_error(seg.labels, gt);
          r.asa = achievable_segmentation_accuracy(seg.labels, gt);
          r.runtime_ms =
              std::chrono::duration<double, std::milli>(t1 - t0).count();
          rows.push_back(std::move(r));
        }
      }
      result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    } catch (const std::exception& e) {
      result.failures.push_back({entry.id, e.what()});
    }
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const MetricsReport& a, const MetricsReport& b) {
              return std::make_tuple(a.image_id, std::string(to_string(a.algo)), a.k) <
                     std::make_tuple(b.image_id, std::string(to_string(b.algo)), b.k);
            });

  std::map<std::tuple<std::string, int>, AggregateRow> agg;
  for (const MetricsReport& r : result.rows) {
    AggregateRow& a = agg[{to_string(r.algo), r.k}];
    a.algo = r.algo;
    a.k = r.k;
    ++a.images;
    a.superpixel_count += r.superpixel_count;
    a.undersegmentation_error += r.undersegmentation_error;
    a.asa += r.asa;
    a.runtime_ms += r.runtime_ms;
  }
  for (auto& [key, a] : agg) {
    const double n = a.images;
    a.superpixel_count /= n;
    a.undersegmentation_error /= n;
    a.asa /= n;
    a.runtime_ms /= n;
    result.aggregates.push_back(a);
  }
  return result;
}

void write_csv(const BenchResult& result, std::ostream& out) {
  if (result.rows.empty())
    throw Error(ErrorCode::empty, "no benchmark rows to write");
  out << "image_id,algo,k,superpixel_count,ue,asa,runtime_ms\n";
  for (const MetricsReport& r : result.rows)
    write_row(out, r.image_id, r.algo, r.k, std::to_string(r.superpixel_count),
              r.undersegmentation_error, r.asa, r.runtime_ms);
  for (const AggregateRow& a : result.aggregates) {
    char count[64];
    std::snprintf(count, sizeof count, "%.6f", a.superpixel_count);
    write_row(out, "MEAN", a.algo, a.k, count, a.undersegmentation_error, a.asa,
              a.runtime_ms);
  }
}

void write_csv(const BenchResult& result, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  write_csv(result, out);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

}  // namespace dslic
