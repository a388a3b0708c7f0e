#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "tadkit/detection.hpp"

namespace tadkit {

// Dense duration x start grid of proposal confidences. Row d scores
// proposals spanning (d+1) stride steps; column t scores proposals starting
// at t*stride seconds. Values live in [0,1].
struct ConfidenceMap {
  std::string video_id;
  std::size_t num_durations = 0;  // rows
  std::size_t num_starts = 0;     // columns
  double stride = 0.0;            // seconds per index step
  std::vector<float> grid;        // row-major, num_durations * num_starts

  float at(std::size_t d, std::size_t t) const {
    return grid[d * num_starts + t];
  }
  // Throws Error when any invariant is violated.
  void validate() const;

  friend bool operator==(const ConfidenceMap& a, const ConfidenceMap& b) {
    return a.video_id == b.video_id && a.num_durations == b.num_durations &&
           a.num_starts == b.num_starts && a.stride == b.stride && a.grid == b.grid;
  }
};

struct FusionSpec {
  std::vector<double> weights;  // one non-negative weight per input map
};

ConfidenceMap read_confidence_map(const std::filesystem::path& path);
void write_confidence_map(const ConfidenceMap& map, const std::filesystem::path& path);

// Weighted arithmetic mean of aligned maps; weights are normalized by their
// sum, so the result is invariant to rescaling the weight vector.
ConfidenceMap fuse_maps(const std::vector<ConfidenceMap>& maps, const FusionSpec& spec);

// Converts the k best cells to unlabeled proposals. Cell (d,t) spans
// [t*stride, (t+d+1)*stride], clipped to the video duration; cells whose
// clipped span is empty are skipped. Result is sorted by score descending,
// ties by (start asc, end asc).
std::vector<ScoredDetection> extract_top_k(const ConfidenceMap& map, std::size_t k,
                                           double video_duration);

}  // namespace tadkit
