#include "tadkit/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "tadkit/error.hpp"

namespace tadkit {

namespace {

double checked_weight_max(const std::vector<double>& weights) {
  double max_w = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("ensemble: weights must be non-negative");
    }
    max_w = std::max(max_w, w);
  }
  if (max_w == 0.0) throw Error("ensemble: all weights are zero");
  return max_w;
}

}  // namespace

PredictionSet merge_detections(const std::vector<PredictionSet>& sets,
                               const std::vector<double>& weights) {
  if (sets.empty()) throw Error("merge_detections: no prediction sets");
  if (weights.size() != sets.size()) {
    throw Error("merge_detections: need one weight per set");
  }
  const double max_w = checked_weight_max(weights);
  for (const auto& s : sets) {
    if (!(s.labels == sets.front().labels)) {
      throw Error("merge_detections: sets use different label spaces");
    }
  }

  PredictionSet out;
  out.labels = sets.front().labels;
  out.version = sets.front().version;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double scale = weights[i] / max_w;
    for (const auto& [video_id, dets] : sets[i].results) {
      auto& list = out.results[video_id];
      for (ScoredDetection d : dets) {
        d.score *= scale;
        list.push_back(d);
      }
    }
  }
  return out;
}

VideoClassScores ensemble_class_scores(const std::vector<VideoClassScores>& all,
                                       const std::vector<double>& weights) {
  if (all.empty()) throw Error("ensemble_class_scores: no inputs");
  if (weights.size() != all.size()) {
    throw Error("ensemble_class_scores: need one weight per input");
  }
  checked_weight_max(weights);
  const std::size_t dim = all.front().probs.size();
  for (const auto& s : all) {
    if (s.video_id != all.front().video_id) {
      throw Error("ensemble_class_scores: inputs are for different videos");
    }
    if (s.probs.size() != dim) {
      throw Error("ensemble_class_scores: probability vectors differ in length");
    }
  }

  VideoClassScores out;
  out.video_id = all.front().video_id;
  out.probs.assign(dim, 0.0);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) {
      out.probs[c] += weights[i] * all[i].probs[c];
    }
  }
  double total = 0.0;
  for (double p : out.probs) total += p;
  if (!(total > 0.0)) throw Error("ensemble_class_scores: zero total probability mass");
  for (double& p : out.probs) p /= total;
  return out;
}

double topk_accuracy(const std::vector<VideoClassScores>& scores,
                     const std::map<std::string, int>& truth, std::size_t k) {
  if (k == 0) throw Error("topk_accuracy: k must be at least 1");
  if (scores.empty()) throw Error("topk_accuracy: no scored videos");

  std::size_t hits = 0;
  for (const auto& s : scores) {
    const auto it = truth.find(s.video_id);
    if (it == truth.end()) {
      throw Error("topk_accuracy: no truth label for video '" + s.video_id + "'");
    }
    const int true_label = it->second;
    if (true_label < 0 || static_cast<std::size_t>(true_label) >= s.probs.size()) {
      throw Error("topk_accuracy: truth label out of range for video '" +
                  s.video_id + "'");
    }
    const double p_true = s.probs[static_cast<std::size_t>(true_label)];
    // Rank = number of classes ordered strictly ahead of the true one under
    // (prob desc, index asc).
    std::size_t ahead = 0;
    for (std::size_t c = 0; c < s.probs.size(); ++c) {
      if (s.probs[c] > p_true ||
          (s.probs[c] == p_true && c < static_cast<std::size_t>(true_label))) {
        ++ahead;
      }
    }
    if (ahead < k) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(scores.size());
}

}  // namespace tadkit
