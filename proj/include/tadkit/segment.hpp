#pragma once

#include <algorithm>
#include <cmath>

#include "tadkit/error.hpp"

namespace tadkit {

// Half-open temporal interval [start, end) in seconds on a video timeline.
struct Segment {
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  bool valid() const {
    return std::isfinite(start) && std::isfinite(end) && start < end;
  }
  friend bool operator==(const Segment& a, const Segment& b) {
    return a.start == b.start && a.end == b.end;
  }
};

// Temporal intersection-over-union. Zero when the segments are disjoint.
inline double tiou(const Segment& a, const Segment& b) {
  const double inter =
      std::min(a.end, b.end) - std::max(a.start, b.start);
  if (inter <= 0.0) return 0.0;
  const double uni = a.duration() + b.duration() - inter;
  return inter / uni;
}

// Clips a segment to [0, duration]. Throws when nothing remains.
inline Segment clamp_segment(const Segment& s, double video_duration) {
  if (!(video_duration > 0.0)) {
    throw Error("clamp_segment: video duration must be positive");
  }
  Segment out;
  out.start = std::clamp(s.start, 0.0, video_duration);
  out.end = std::clamp(s.end, 0.0, video_duration);
  if (!(out.start < out.end)) {
    throw Error("clamp_segment: segment lies outside [0, duration]");
  }
  return out;
}

}  // namespace tadkit
