#include "tadkit/pk_sampler.hpp"

#include <limits>
#include <map>

#include "tadkit/error.hpp"

namespace tadkit {

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw Error("uniform_index: empty range");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::vector<std::size_t> pk_sample(const std::vector<int>& labels,
                                   const SamplerConfig& cfg) {
  if (cfg.p_categories == 0 || cfg.k_samples == 0) {
    throw Error("pk_sample: P and K must be at least 1");
  }

  // Label -> member indices, ordered by label for reproducibility.
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_label[labels[i]].push_back(i);
  }
  if (by_label.size() < cfg.p_categories) {
    throw Error("pk_sample: only " + std::to_string(by_label.size()) +
                " distinct labels for P=" + std::to_string(cfg.p_categories));
  }

  std::vector<int> distinct;
  distinct.reserve(by_label.size());
  for (const auto& [label, members] : by_label) distinct.push_back(label);

  std::mt19937_64 rng(cfg.seed);

  // Partial Fisher-Yates picks P labels without replacement.
  for (std::size_t i = 0; i < cfg.p_categories; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(uniform_index(rng, distinct.size() - i));
    std::swap(distinct[i], distinct[j]);
  }

  std::vector<std::size_t> out;
  out.reserve(cfg.p_categories * cfg.k_samples);
  for (std::size_t p = 0; p < cfg.p_categories; ++p) {
    std::vector<std::size_t> members = by_label[distinct[p]];
    if (members.size() >= cfg.k_samples) {
      for (std::size_t i = 0; i < cfg.k_samples; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(uniform_index(rng, members.size() - i));
        std::swap(members[i], members[j]);
        out.push_back(members[i]);
      }
    } else {
      for (std::size_t i = 0; i < cfg.k_samples; ++i) {
        out.push_back(members[static_cast<std::size_t>(
            uniform_index(rng, members.size()))]);
      }
    }
  }
  return out;
}

}  // namespace tadkit
