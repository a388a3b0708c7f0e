#pragma once

#include <vector>

#include "tadkit/segment.hpp"

namespace tadkit {

// Training-time proposal synthesized by shifting a ground-truth boundary.
// Applying the regression target to the segment recovers the ground truth:
//   gt.start = segment.start + dstart * segment.duration()
//   gt.end   = segment.end   + dend   * segment.duration()
struct FakeProposal {
  Segment segment;
  double dstart = 0.0;
  double dend = 0.0;
};

// Boundary offsets as fractions of the ground-truth duration, one fraction
// per boundary, combined as a Cartesian product.
std::vector<double> default_offsets();

// Emits one proposal per ordered offset pair (row-major over `offsets`),
// skipping pairs that collapse the segment. Offsets must satisfy |f| < 0.5.
std::vector<FakeProposal> generate_fake_proposals(const Segment& gt,
                                                  const std::vector<double>& offsets);

}  // namespace tadkit
