#pragma once

#include <map>
#include <string>
#include <vector>

#include "tadkit/annotations.hpp"

namespace tadkit {

// Per-video probability vector over a label space.
struct VideoClassScores {
  std::string video_id;
  std::vector<double> probs;
};

// Union of detection sets with scores scaled by per-model weights. Weights
// are normalized by their maximum, so a single-model ensemble is the
// identity and relative order within each source set is preserved.
PredictionSet merge_detections(const std::vector<PredictionSet>& sets,
                               const std::vector<double>& weights);

// Weighted arithmetic mean of probability vectors for one video,
// renormalized to sum 1.
VideoClassScores ensemble_class_scores(const std::vector<VideoClassScores>& all,
                                       const std::vector<double>& weights);

// Percentage of videos whose true label ranks among the k most probable
// classes. Equal probabilities rank the lower label index first.
double topk_accuracy(const std::vector<VideoClassScores>& scores,
                     const std::map<std::string, int>& truth, std::size_t k);

}  // namespace tadkit
