#include "tadkit/nms.hpp"

#include <algorithm>
#include <cmath>

#include "tadkit/error.hpp"

namespace tadkit {

double NmsConfig::sigma_for(int label) const {
  if (auto it = per_category.find(label); it != per_category.end() && it->second.sigma) {
    return *it->second.sigma;
  }
  return sigma;
}

double NmsConfig::floor_for(int label) const {
  if (auto it = per_category.find(label);
      it != per_category.end() && it->second.score_floor) {
    return *it->second.score_floor;
  }
  return score_floor;
}

namespace {

void check_config(double sigma, double floor) {
  if (!(sigma > 0.0)) throw Error("soft_nms: sigma must be positive");
  if (!(floor >= 0.0 && floor < 1.0)) {
    throw Error("soft_nms: score floor must lie in [0, 1)");
  }
}

double decay_factor(double overlap, double sigma, NmsDecay decay) {
  if (overlap <= 0.0) return 1.0;
  if (sigma < NmsConfig::kHardSigma) return 0.0;
  if (decay == NmsDecay::kLinear) return 1.0 - overlap;
  return std::exp(-(overlap * overlap) / sigma);
}

}  // namespace

std::vector<ScoredDetection> soft_nms(std::vector<ScoredDetection> detections,
                                      const NmsConfig& cfg) {
  if (detections.empty()) return {};
  const int label = detections.front().label;
  for (const auto& d : detections) {
    if (d.label != label) {
      throw Error("soft_nms: detections must share one label");
    }
  }
  const double sigma = cfg.sigma_for(label);
  const double floor = cfg.floor_for(label);
  check_config(sigma, floor);

  std::vector<ScoredDetection> kept;
  kept.reserve(detections.size());
  while (!detections.empty()) {
    auto best = std::min_element(detections.begin(), detections.end(), score_order);
    if (best->score < floor) break;
    const ScoredDetection selected = *best;
    detections.erase(best);
    kept.push_back(selected);

    for (auto& d : detections) {
      d.score *= decay_factor(tiou(selected.segment, d.segment), sigma, cfg.decay);
    }
    detections.erase(std::remove_if(detections.begin(), detections.end(),
                                    [floor](const ScoredDetection& d) {
                                      return d.score < floor;
                                    }),
                     detections.end());
  }
  std::sort(kept.begin(), kept.end(), score_order);
  return kept;
}

PredictionSet apply_soft_nms(const PredictionSet& set, const NmsConfig& cfg) {
  PredictionSet out;
  out.labels = set.labels;
  out.version = set.version;
  for (const auto& [video_id, dets] : set.results) {
    std::map<int, std::vector<ScoredDetection>> by_label;
    for (const auto& d : dets) by_label[d.label].push_back(d);

    std::vector<ScoredDetection> merged;
    merged.reserve(dets.size());
    for (auto& [label, group] : by_label) {
      auto suppressed = soft_nms(std::move(group), cfg);
      merged.insert(merged.end(), suppressed.begin(), suppressed.end());
    }
    out.results.emplace(video_id, std::move(merged));
  }
  return out;
}

}  // namespace tadkit
