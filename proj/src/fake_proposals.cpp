#include "tadkit/fake_proposals.hpp"

#include <cmath>

#include "tadkit/error.hpp"

namespace tadkit {

std::vector<double> default_offsets() {
  return {-0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2};
}

std::vector<FakeProposal> generate_fake_proposals(const Segment& gt,
                                                  const std::vector<double>& offsets) {
  if (!gt.valid()) throw Error("generate_fake_proposals: invalid ground truth segment");
  if (offsets.empty()) throw Error("generate_fake_proposals: empty offset list");
  for (double f : offsets) {
    if (!std::isfinite(f) || std::abs(f) >= 0.5) {
      throw Error("generate_fake_proposals: offset fractions must satisfy |f| < 0.5");
    }
  }

  const double d = gt.duration();
  std::vector<FakeProposal> out;
  out.reserve(offsets.size() * offsets.size());
  for (double f_start : offsets) {
    for (double f_end : offsets) {
      Segment fake{gt.start + f_start * d, gt.end + f_end * d};
      if (!(fake.start < fake.end)) continue;
      const double d_fake = fake.duration();
      out.push_back({fake,
                     (gt.start - fake.start) / d_fake,
                     (gt.end - fake.end) / d_fake});
    }
  }
  return out;
}

}  // namespace tadkit
