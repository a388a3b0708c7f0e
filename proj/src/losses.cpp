#include "tadkit/losses.hpp"

#include <algorithm>
#include <cmath>

#include "tadkit/error.hpp"

namespace tadkit {

namespace {

constexpr double kCrossEntropyEps = 1e-12;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(std::string(what) + " must be finite");
}

void check_similarities(const std::vector<double>& s, const char* what) {
  for (double v : s) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw Error(std::string(what) + " similarities must lie in [-1, 1]");
    }
  }
}

}  // namespace

TripletResult triplet_loss(double s_p, double s_n, const TripletParams& params) {
  check_finite(s_p, "triplet_loss: s_p");
  check_finite(s_n, "triplet_loss: s_n");
  if (!(params.margin >= 0.0)) throw Error("triplet_loss: margin must be >= 0");

  const double raw = s_n - s_p + params.margin;
  TripletResult r;
  if (raw > 0.0) {
    r.value = raw;
    r.grad_s_p = -1.0;
    r.grad_s_n = 1.0;
  }
  return r;
}

CircleResult circle_loss(const SimilarityBatch& batch, const CircleParams& params) {
  if (batch.s_p.empty() || batch.s_n.empty()) {
    throw Error("circle_loss: needs at least one positive and one negative similarity");
  }
  check_similarities(batch.s_p, "circle_loss: positive");
  check_similarities(batch.s_n, "circle_loss: negative");
  if (!(params.margin >= 0.0 && params.margin <= 1.0)) {
    throw Error("circle_loss: margin must lie in [0, 1]");
  }
  if (!(params.gamma >= 0.0)) throw Error("circle_loss: gamma must be >= 0");

  const double m = params.margin;
  const double gamma = params.gamma;
  const double delta_p = 1.0 - m;
  const double delta_n = m;

  std::vector<double> alpha_p(batch.s_p.size());
  std::vector<double> alpha_n(batch.s_n.size());
  std::vector<double> logit_p(batch.s_p.size());
  std::vector<double> logit_n(batch.s_n.size());
  for (std::size_t i = 0; i < batch.s_p.size(); ++i) {
    alpha_p[i] = std::max(1.0 + m - batch.s_p[i], 0.0);
    logit_p[i] = gamma * alpha_p[i] * (batch.s_p[i] - delta_p);
  }
  for (std::size_t j = 0; j < batch.s_n.size(); ++j) {
    alpha_n[j] = std::max(batch.s_n[j] + m, 0.0);
    logit_n[j] = gamma * alpha_n[j] * (batch.s_n[j] - delta_n);
  }

  // L = log(1 + sum_ij exp(logit_n[j] - logit_p[i])), shifted by the largest
  // exponent (the implicit 1 counts as exp(0)) to stay finite.
  double max_exp = 0.0;
  for (double ln : logit_n) {
    for (double lp : logit_p) {
      max_exp = std::max(max_exp, ln - lp);
    }
  }
  double shifted_sum = std::exp(-max_exp);  // the leading 1
  std::vector<double> row_weight(batch.s_p.size(), 0.0);  // sum_j exp(e_ij) per i
  std::vector<double> col_weight(batch.s_n.size(), 0.0);  // sum_i exp(e_ij) per j
  for (std::size_t j = 0; j < batch.s_n.size(); ++j) {
    for (std::size_t i = 0; i < batch.s_p.size(); ++i) {
      const double e = std::exp(logit_n[j] - logit_p[i] - max_exp);
      shifted_sum += e;
      row_weight[i] += e;
      col_weight[j] += e;
    }
  }

  CircleResult r;
  r.value = max_exp + std::log(shifted_sum);
  r.grad_s_p.resize(batch.s_p.size());
  r.grad_s_n.resize(batch.s_n.size());
  for (std::size_t i = 0; i < batch.s_p.size(); ++i) {
    r.grad_s_p[i] = -gamma * alpha_p[i] * row_weight[i] / shifted_sum;
  }
  for (std::size_t j = 0; j < batch.s_n.size(); ++j) {
    r.grad_s_n[j] = gamma * alpha_n[j] * col_weight[j] / shifted_sum;
  }
  return r;
}

CrossEntropyResult cross_entropy(const std::vector<double>& probabilities,
                                 std::size_t true_class) {
  if (true_class >= probabilities.size()) {
    throw Error("cross_entropy: class index out of range");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw Error("cross_entropy: probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error("cross_entropy: probabilities must sum to 1");
  }

  CrossEntropyResult r;
  const double p_true = probabilities[true_class] + kCrossEntropyEps;
  r.value = -std::log(p_true);
  r.grad.assign(probabilities.size(), 0.0);
  r.grad[true_class] = -1.0 / p_true;
  return r;
}

double combined_loss(double ce, double metric, double weight) {
  check_finite(ce, "combined_loss: ce");
  check_finite(metric, "combined_loss: metric");
  if (!(weight >= 0.0)) throw Error("combined_loss: weight must be >= 0");
  return ce + weight * metric;
}

std::vector<SimilarityBatch> build_similarity_batches(
    const std::vector<std::vector<double>>& similarity, const std::vector<int>& labels,
    PairingMode mode) {
  const std::size_t n = labels.size();
  if (similarity.size() != n) {
    throw Error("build_similarity_batches: similarity matrix must be NxN");
  }
  for (const auto& row : similarity) {
    if (row.size() != n) {
      throw Error("build_similarity_batches: similarity matrix must be NxN");
    }
    check_similarities(row, "build_similarity_batches:");
  }

  std::vector<SimilarityBatch> batches;
  for (std::size_t anchor = 0; anchor < n; ++anchor) {
    SimilarityBatch b;
    for (std::size_t other = 0; other < n; ++other) {
      if (other == anchor) continue;
      if (labels[other] == labels[anchor]) {
        b.s_p.push_back(similarity[anchor][other]);
      } else {
        b.s_n.push_back(similarity[anchor][other]);
      }
    }
    if (b.s_p.empty() || b.s_n.empty()) continue;
    if (mode == PairingMode::kBatchHard) {
      const double hardest_p = *std::min_element(b.s_p.begin(), b.s_p.end());
      const double hardest_n = *std::max_element(b.s_n.begin(), b.s_n.end());
      b.s_p.assign(1, hardest_p);
      b.s_n.assign(1, hardest_n);
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

}  // namespace tadkit
