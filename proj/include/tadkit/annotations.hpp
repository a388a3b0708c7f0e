#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tadkit/detection.hpp"
#include "tadkit/labels.hpp"
#include "tadkit/segment.hpp"

namespace tadkit {

struct GtInstance {
  Segment segment;
  int label = -1;
};

struct VideoRecord {
  double duration = 0.0;
  std::string subset;
  std::vector<GtInstance> annotations;
};

// Validated ground truth. Immutable after load; safe to share across threads.
struct GroundTruthDataset {
  LabelSpace labels;
  std::map<std::string, VideoRecord> videos;
  // Number of annotation segments that had to be clipped to [0, duration].
  int clamp_warnings = 0;
};

// Challenge-style prediction container: per-video detection lists in file
// order. Scores are in [0,1]; segments satisfy start < end.
struct PredictionSet {
  LabelSpace labels;
  std::string version;
  std::map<std::string, std::vector<ScoredDetection>> results;

  friend bool operator==(const PredictionSet& a, const PredictionSet& b) {
    return a.labels == b.labels && a.version == b.version && a.results == b.results;
  }
};

GroundTruthDataset load_ground_truth(const std::filesystem::path& path,
                                     const LabelSpace& labels);

PredictionSet load_predictions(const std::filesystem::path& path,
                               const LabelSpace& labels);

// Lossless inverse of load_predictions: numbers keep their exact value
// through one write/load round trip.
void write_predictions(const PredictionSet& set, const std::filesystem::path& path);
std::string predictions_to_string(const PredictionSet& set);

}  // namespace tadkit
