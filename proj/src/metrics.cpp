#include "dslic/metrics.hpp"

#include <algorithm>
#include <vector>

#include "dslic/error.hpp"

namespace dslic {
namespace {

void check_pair(const LabelMap& seg, const LabelMap& gt) {
  if (seg.width() != gt.width() || seg.height() != gt.height())
    throw Error(ErrorCode::dimension, "segmentation and ground truth differ in size");
  if (seg.empty()) throw Error(ErrorCode::empty, "empty segmentation");
}

// Sparse contingency table of (superpixel, region) overlaps.
struct Overlap {
  std::int32_t superpixel;
  std::int32_t region;
  std::int64_t count;
};

struct Contingency {
  std::vector<Overlap> cells;  // sorted by (superpixel, region)
  std::vector<std::int64_t> superpixel_size;
};

Contingency contingency(const LabelMap& seg, const LabelMap& gt) {
  const LabelMap s = relabel_compact(seg);
  const LabelMap g = relabel_compact(gt);
  const std::int64_t regions = count_labels(g);

  std::vector<std::int64_t> keys(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    keys[i] = static_cast<std::int64_t>(s[i]) * regions + g[i];
  std::sort(keys.begin(), keys.end());

  Contingency t;
  t.superpixel_size.assign(count_labels(s), 0);
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    const auto sp = static_cast<std::int32_t>(keys[i] / regions);
    const auto rg = static_cast<std::int32_t>(keys[i] % regions);
    const auto n = static_cast<std::int64_t>(j - i);
    t.cells.push_back({sp, rg, n});
    t.superpixel_size[sp] += n;
    i = j;
  }
  return t;
}

}  // namespace

LabelMap relabel_compact(const LabelMap& labels) {
  std::vector<std::int32_t> distinct(labels.values().begin(),
                                     labels.values().end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  LabelMap out(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = static_cast<std::int32_t>(
        std::lower_bound(distinct.begin(), distinct.end(), labels[i]) -
        distinct.begin());
  return out;
}

int count_labels(const LabelMap& labels) {
  std::vector<std::int32_t> v(labels.values().begin(), labels.values().end());
  std::sort(v.begin(), v.end());
  return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

double undersegmentation_error(const LabelMap& seg, const LabelMap& gt) {
  check_pair(seg, gt);
  const Contingency t = contingency(seg, gt);
  std::int64_t leak = 0;
  for (const Overlap& o : t.cells)
    leak += std::min(o.count, t.superpixel_size[o.superpixel] - o.count);
  return static_cast<double>(leak) / static_cast<double>(seg.size());
}

double achievable_segmentation_accuracy(const LabelMap& seg,
                                        const LabelMap& gt) {
  check_pair(seg, gt);
  const Contingency t = contingency(seg, gt);
  std::vector<std::int64_t> best(t.superpixel_size.size(), 0);
  for (const Overlap& o : t.cells)
    best[o.superpixel] = std::max(best[o.superpixel], o.count);
  std::int64_t hit = 0;
  for (std::int64_t b : best) hit += b;
  return static_cast<double>(hit) / static_cast<double>(seg.size());
}

}  // namespace dslic
