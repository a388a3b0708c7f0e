#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace tadkit {

struct SamplerConfig {
  std::size_t p_categories = 1;
  std::size_t k_samples = 1;
  std::uint64_t seed = 0;
};

// Draws an index in [0, n) from the engine's standard-specified output
// stream, so results are identical across platforms and stdlib versions.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

// Builds a P*K mini-batch: P distinct categories drawn uniformly without
// replacement, then K member indices per category (without replacement when
// the category has at least K members, with replacement otherwise). Inputs
// are per-sample first-category indices; output is deterministic per seed.
std::vector<std::size_t> pk_sample(const std::vector<int>& labels,
                                   const SamplerConfig& cfg);

}  // namespace tadkit
