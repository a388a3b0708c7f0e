#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tadkit/annotations.hpp"
#include "tadkit/detection.hpp"

namespace tadkit {

enum class NmsDecay { kGaussian, kLinear };

struct NmsCategoryOverride {
  std::optional<double> sigma;
  std::optional<double> score_floor;
};

// Suppression parameters. Sigma below kHardSigma switches to classical hard
// suppression, where any overlap zeroes the neighbor's score.
struct NmsConfig {
  static constexpr double kHardSigma = 1e-9;

  double sigma = 0.5;
  double score_floor = 1e-4;
  NmsDecay decay = NmsDecay::kGaussian;
  std::map<int, NmsCategoryOverride> per_category;  // keyed by label index

  double sigma_for(int label) const;
  double floor_for(int label) const;
};

// Iterative soft-NMS over detections sharing one (video, label): the best
// remaining detection is emitted, every other score is decayed by overlap
// with it, and scores falling below the floor are dropped. Output is sorted
// by final score descending, ties by (start asc, end asc).
std::vector<ScoredDetection> soft_nms(std::vector<ScoredDetection> detections,
                                      const NmsConfig& cfg);

// Applies soft_nms per (video, label) group. Per-video output is assembled
// label index ascending, each group in suppressed-score order.
PredictionSet apply_soft_nms(const PredictionSet& set, const NmsConfig& cfg);

}  // namespace tadkit
