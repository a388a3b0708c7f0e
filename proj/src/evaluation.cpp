#include "tadkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "tadkit/error.hpp"

namespace tadkit {

std::vector<double> EvalConfig::default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.5 + 0.05 * i);
  return t;
}

namespace {

void check_config(const EvalConfig& cfg) {
  if (cfg.top_m == 0) throw Error("evaluate: top_m must be at least 1");
  if (cfg.tiou_thresholds.empty()) throw Error("evaluate: no tIoU thresholds");
  double prev = 0.0;
  for (double t : cfg.tiou_thresholds) {
    if (!(t > prev && t <= 1.0)) {
      throw Error("evaluate: thresholds must be strictly increasing in (0, 1]");
    }
    prev = t;
  }
}

bool detection_order(const DetectionInstance& a, const DetectionInstance& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.segment.start != b.segment.start) return a.segment.start < b.segment.start;
  return a.segment.end < b.segment.end;
}

}  // namespace

PredictionSet select_top_m(const PredictionSet& preds, std::size_t m) {
  if (m == 0) throw Error("select_top_m: m must be at least 1");
  PredictionSet out;
  out.labels = preds.labels;
  out.version = preds.version;
  for (const auto& [video_id, dets] : preds.results) {
    std::vector<ScoredDetection> kept = dets;
    std::stable_sort(kept.begin(), kept.end(), score_order);
    if (kept.size() > m) kept.resize(m);
    out.results.emplace(video_id, std::move(kept));
  }
  return out;
}

double average_precision(std::vector<DetectionInstance> detections,
                         const std::vector<GroundTruthInstance>& ground_truth,
                         double tiou_threshold) {
  if (ground_truth.empty()) return 0.0;
  if (detections.empty()) return 0.0;

  std::stable_sort(detections.begin(), detections.end(), detection_order);

  std::vector<bool> consumed(ground_truth.size(), false);
  const std::size_t num_gt = ground_truth.size();

  // Cumulative precision/recall after each detection.
  std::vector<double> precision(detections.size());
  std::vector<double> recall(detections.size());
  std::size_t true_positives = 0;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    double best_overlap = 0.0;
    std::size_t best_gt = ground_truth.size();
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (consumed[g] || ground_truth[g].video != detections[d].video) continue;
      const double overlap = tiou(detections[d].segment, ground_truth[g].segment);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best_gt = g;
      }
    }
    if (best_gt < ground_truth.size() && best_overlap >= tiou_threshold) {
      consumed[best_gt] = true;
      ++true_positives;
    }
    precision[d] = static_cast<double>(true_positives) / static_cast<double>(d + 1);
    recall[d] = static_cast<double>(true_positives) / static_cast<double>(num_gt);
  }

  // Right-to-left running maximum interpolates the precision curve.
  for (std::size_t d = detections.size() - 1; d-- > 0;) {
    precision[d] = std::max(precision[d], precision[d + 1]);
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    ap += (recall[d] - prev_recall) * precision[d];
    prev_recall = recall[d];
  }
  return ap;
}

EvalReport evaluate(const PredictionSet& preds, const GroundTruthDataset& gt,
                    const EvalConfig& cfg) {
  check_config(cfg);
  if (!(preds.labels == gt.labels)) {
    throw Error("evaluate: prediction and ground-truth label spaces differ");
  }

  const PredictionSet cut = select_top_m(preds, cfg.top_m);
  const std::size_t num_classes = gt.labels.size();
  const std::size_t num_thresholds = cfg.tiou_thresholds.size();

  // Intern video ids; gt.videos and cut.results are both ordered maps so
  // assembly order is deterministic.
  std::map<std::string, int> video_key;
  for (const auto& [video_id, rec] : gt.videos) {
    video_key.emplace(video_id, static_cast<int>(video_key.size()));
  }

  std::vector<std::vector<GroundTruthInstance>> gt_by_class(num_classes);
  for (const auto& [video_id, rec] : gt.videos) {
    const int key = video_key.at(video_id);
    for (const auto& inst : rec.annotations) {
      gt_by_class[static_cast<std::size_t>(inst.label)].push_back({key, inst.segment});
    }
  }
  std::vector<std::vector<DetectionInstance>> det_by_class(num_classes);
  for (const auto& [video_id, dets] : cut.results) {
    // Videos absent from the ground truth still get keys; their detections
    // can never match and count as false positives.
    const auto it = video_key.emplace(video_id, static_cast<int>(video_key.size())).first;
    for (const auto& d : dets) {
      if (d.label < 0 || static_cast<std::size_t>(d.label) >= num_classes) {
        throw Error("evaluate: detection label out of range in video '" + video_id + "'");
      }
      det_by_class[static_cast<std::size_t>(d.label)].push_back(
          {it->second, d.segment, d.score});
    }
  }

  EvalReport report;
  report.class_names = gt.labels.names();
  report.tiou_thresholds = cfg.tiou_thresholds;
  report.per_class_ap.assign(num_classes, std::vector<double>(num_thresholds, 0.0));
  report.num_gt.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    report.num_gt[c] = gt_by_class[c].size();
    for (std::size_t t = 0; t < num_thresholds; ++t) {
      report.per_class_ap[c][t] =
          average_precision(det_by_class[c], gt_by_class[c], cfg.tiou_thresholds[t]);
    }
  }

  // Classes without ground truth are excluded from the mean.
  std::size_t classes_with_gt = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (report.num_gt[c] > 0) ++classes_with_gt;
  }
  report.map_per_threshold.assign(num_thresholds, 0.0);
  if (classes_with_gt > 0) {
    for (std::size_t t = 0; t < num_thresholds; ++t) {
      double sum = 0.0;
      for (std::size_t c = 0; c < num_classes; ++c) {
        if (report.num_gt[c] > 0) sum += report.per_class_ap[c][t];
      }
      report.map_per_threshold[t] = sum / static_cast<double>(classes_with_gt);
    }
  }
  double total = 0.0;
  for (double m : report.map_per_threshold) total += m;
  report.average_map = total / static_cast<double>(num_thresholds);
  return report;
}

namespace {

// Round through a 9-significant-digit decimal so serialized reports are
// byte-stable without carrying noise digits.
double round_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["labels"] = report.class_names;
  j["tiou_thresholds"] = report.tiou_thresholds;
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& row : report.per_class_ap) {
    nlohmann::json out_row = nlohmann::json::array();
    for (double ap : row) out_row.push_back(round_sig9(ap));
    per_class.push_back(std::move(out_row));
  }
  j["per_class_ap"] = std::move(per_class);
  j["num_gt"] = report.num_gt;
  nlohmann::json maps = nlohmann::json::array();
  for (double m : report.map_per_threshold) maps.push_back(round_sig9(m));
  j["map_per_threshold"] = std::move(maps);
  j["average_map"] = round_sig9(report.average_map);
  return j.dump(2);
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[40];
  out << "tIoU   ";
  for (double t : report.tiou_thresholds) {
    std::snprintf(buf, sizeof(buf), " %6.2f", t);
    out << buf;
  }
  out << "\nmAP(%) ";
  for (double m : report.map_per_threshold) {
    std::snprintf(buf, sizeof(buf), " %6.2f", 100.0 * m);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * report.average_map);
  out << "\nAverage mAP(%): " << buf << "\n";
  return out.str();
}

}  // namespace tadkit
