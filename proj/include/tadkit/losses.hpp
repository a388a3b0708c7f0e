#pragma once

#include <cstddef>
#include <vector>

namespace tadkit {

// Positive/negative similarity lists for one anchor, all values in [-1, 1].
struct SimilarityBatch {
  std::vector<double> s_p;
  std::vector<double> s_n;
};

struct TripletParams {
  double margin = 0.3;
};

struct CircleParams {
  double margin = 0.25;
  double gamma = 32.0;
};

struct TripletResult {
  double value = 0.0;
  double grad_s_p = 0.0;
  double grad_s_n = 0.0;
};

struct CircleResult {
  double value = 0.0;
  std::vector<double> grad_s_p;
  std::vector<double> grad_s_n;
};

struct CrossEntropyResult {
  double value = 0.0;
  std::vector<double> grad;
};

// Hinge on the similarity gap: max(s_n - s_p + m, 0). The subgradient at the
// kink is zero.
TripletResult triplet_loss(double s_p, double s_n, const TripletParams& params);

// log[1 + sum_j sum_i exp(gamma * (a_n^j (s_n^j - m) - a_p^i (s_p^i - (1-m))))]
// with self-paced weights a_p = [1+m-s_p]_+ and a_n = [s_n+m]_+. The weights
// are treated as constants when differentiating, and the log-sum-exp is
// evaluated in an overflow-safe form.
CircleResult circle_loss(const SimilarityBatch& batch, const CircleParams& params);

// -log(p_true + eps) with eps = 1e-12 so degenerate inputs stay finite.
CrossEntropyResult cross_entropy(const std::vector<double>& probabilities,
                                 std::size_t true_class);

// ce + weight * metric.
double combined_loss(double ce, double metric, double weight);

// How per-anchor similarity batches are assembled from a pairwise similarity
// matrix: every positive/negative pair, or only the hardest of each.
enum class PairingMode { kBatchAll, kBatchHard };

// Builds one SimilarityBatch per anchor from a square similarity matrix and
// per-sample labels. Anchors lacking a positive or a negative are skipped.
std::vector<SimilarityBatch> build_similarity_batches(
    const std::vector<std::vector<double>>& similarity, const std::vector<int>& labels,
    PairingMode mode = PairingMode::kBatchAll);

}  // namespace tadkit
