#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tadkit/annotations.hpp"

namespace tadkit {

struct EvalConfig {
  // 0.50, 0.55, ..., 0.95 by default; strictly increasing, each in (0, 1].
  std::vector<double> tiou_thresholds;
  std::size_t top_m = 120;

  static std::vector<double> default_thresholds();
  EvalConfig() : tiou_thresholds(default_thresholds()) {}
};

struct EvalReport {
  std::vector<std::string> class_names;
  std::vector<double> tiou_thresholds;
  std::vector<std::vector<double>> per_class_ap;  // [class][threshold]
  std::vector<std::size_t> num_gt;                // instances per class
  std::vector<double> map_per_threshold;          // mean over classes with GT
  double average_map = 0.0;
};

// One class's detection, tagged with an interned video key so matching
// stays within a video.
struct DetectionInstance {
  int video = -1;
  Segment segment;
  double score = 0.0;
};

struct GroundTruthInstance {
  int video = -1;
  Segment segment;
};

// Keeps the m best-scoring detections per video (ties: start, end, label asc).
PredictionSet select_top_m(const PredictionSet& preds, std::size_t m);

// Interpolated average precision for one class at one tIoU threshold.
// Detections are processed in score order and each greedily consumes the
// unmatched same-video ground truth with the highest overlap >= threshold.
double average_precision(std::vector<DetectionInstance> detections,
                         const std::vector<GroundTruthInstance>& ground_truth,
                         double tiou_threshold);

// Full protocol: top-M cut, per-class AP at every threshold, mAP per
// threshold over classes with ground truth, and the threshold-averaged mAP.
EvalReport evaluate(const PredictionSet& preds, const GroundTruthDataset& gt,
                    const EvalConfig& cfg);

// Report serialization used by the CLI: JSON (numbers rounded to 9
// significant digits) and a threshold/mAP table.
std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

}  // namespace tadkit
