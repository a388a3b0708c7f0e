// Slow reference implementations used only by tests. Each one is written
// independently of the library code it cross-checks.
#pragma once

#include <cstddef>
#include <vector>

#include "tadkit/detection.hpp"
#include "tadkit/evaluation.hpp"
#include "tadkit/losses.hpp"

namespace tadkit::oracle {

// Interpolated AP recomputed from scratch for every prefix of the
// score-sorted detection list.
double brute_force_average_precision(std::vector<DetectionInstance> detections,
                                     const std::vector<GroundTruthInstance>& ground_truth,
                                     double tiou_threshold);

// Greedy hard NMS: keep the best-scoring detection, delete every remaining
// one that overlaps it at all, repeat. Detections below the floor never
// survive.
std::vector<ScoredDetection> brute_force_hard_nms(std::vector<ScoredDetection> detections,
                                                  double score_floor);

// Naive unshifted double-sum evaluation of the circle loss.
double brute_force_circle_value(const SimilarityBatch& batch, const CircleParams& params);

// Circle value with the self-paced weights pinned to the given constants;
// this is the function the analytic gradient differentiates.
double circle_value_with_fixed_weights(const std::vector<double>& s_p,
                                       const std::vector<double>& s_n,
                                       const std::vector<double>& alpha_p,
                                       const std::vector<double>& alpha_n,
                                       double margin, double gamma);

// Central finite difference of a scalar function of one coordinate.
template <typename F>
double central_difference(F&& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace tadkit::oracle
