#pragma once

#include <string>

#include "dslic/clustering.hpp"
#include "dslic/plane.hpp"

namespace dslic {

struct MetricsReport {
  std::string image_id;
  Algorithm algo = Algorithm::slic;
  int k = 0;
  int superpixel_count = 0;
  double undersegmentation_error = 0.0;
  double asa = 0.0;
  double runtime_ms = 0.0;
};

/// Renumbers labels to 0..L-1 following the sorted order of the distinct
/// values. The partition is unchanged.
LabelMap relabel_compact(const LabelMap& labels);

int count_labels(const LabelMap& labels);

/// UE = (1/N) sum_P sum_{G : P∩G != ∅} min(|P∩G|, |P \ G|).
double undersegmentation_error(const LabelMap& seg, const LabelMap& gt);

/// ASA = (1/N) sum_P max_G |P∩G|.
double achievable_segmentation_accuracy(const LabelMap& seg,
                                        const LabelMap& gt);

}  // namespace dslic
