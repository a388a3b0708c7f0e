#pragma once

#include "tadkit/segment.hpp"

namespace tadkit {

// One scored action interval. `label` indexes a LabelSpace; -1 means the
// detection is still an unclassified proposal.
struct ScoredDetection {
  Segment segment;
  int label = -1;
  double score = 0.0;

  friend bool operator==(const ScoredDetection& a, const ScoredDetection& b) {
    return a.segment == b.segment && a.label == b.label && a.score == b.score;
  }
};

// Canonical ordering: score descending, then start asc, end asc, label asc.
inline bool score_order(const ScoredDetection& a, const ScoredDetection& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.segment.start != b.segment.start) return a.segment.start < b.segment.start;
  if (a.segment.end != b.segment.end) return a.segment.end < b.segment.end;
  return a.label < b.label;
}

}  // namespace tadkit
