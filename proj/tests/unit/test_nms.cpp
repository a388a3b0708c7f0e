#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle/oracles.hpp"
#include "tadkit/error.hpp"
#include "tadkit/nms.hpp"

using namespace tadkit;

namespace {

std::vector<ScoredDetection> random_group(std::mt19937_64& rng, std::size_t n,
                                          double span = 20.0) {
  std::uniform_real_distribution<double> start(0.0, span);
  std::uniform_real_distribution<double> len(0.5, span / 2);
  std::uniform_real_distribution<double> score(0.05, 1.0);
  std::vector<ScoredDetection> dets;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = start(rng);
    dets.push_back({{s, s + len(rng)}, 3, score(rng)});
  }
  return dets;
}

}  // namespace

TEST_CASE("soft_nms leaves single and disjoint detections untouched") {
  NmsConfig cfg;

  const auto single = soft_nms({{{0, 1}, 0, 0.9}}, cfg);
  REQUIRE(single.size() == 1);
  CHECK(single[0].score == 0.9);

  const auto disjoint = soft_nms({{{0, 1}, 0, 0.9}, {{5, 6}, 0, 0.8}}, cfg);
  REQUIRE(disjoint.size() == 2);
  CHECK(disjoint[0].score == 0.9);
  CHECK(disjoint[1].score == 0.8);

  CHECK(soft_nms({}, cfg).empty());
}

TEST_CASE("soft_nms hand-derived Gaussian decay") {
  NmsConfig cfg;
  cfg.sigma = 0.5;
  const auto out = soft_nms({{{0.0, 1.0}, 0, 0.9}, {{0.1, 1.1}, 0, 0.8}}, cfg);
  REQUIRE(out.size() == 2);
  CHECK(out[0].score == 0.9);
  const double overlap = 0.9 / 1.1;
  CHECK(out[1].score ==
        doctest::Approx(0.8 * std::exp(-overlap * overlap / 0.5)).epsilon(1e-12));
  CHECK(out[1].score == doctest::Approx(0.20971).epsilon(1e-3));
}

TEST_CASE("soft_nms never raises scores or edits segments") {
  std::mt19937_64 rng(42);
  NmsConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const auto input = random_group(rng, 10);
    const auto output = soft_nms(input, cfg);
    CHECK(output.size() <= input.size());
    for (const auto& out : output) {
      bool found = false;
      for (const auto& in : input) {
        if (in.segment == out.segment && out.score <= in.score + 1e-15) found = true;
      }
      CHECK(found);
    }
    for (std::size_t i = 1; i < output.size(); ++i) {
      CHECK(output[i - 1].score >= output[i].score);
    }
  }
}

TEST_CASE("soft_nms drops scores below the floor") {
  NmsConfig cfg;
  cfg.sigma = 0.01;  // aggressive decay
  cfg.score_floor = 0.5;
  const auto out = soft_nms({{{0.0, 1.0}, 0, 0.9}, {{0.05, 1.0}, 0, 0.85}}, cfg);
  REQUIRE(out.size() == 1);
  CHECK(out[0].score == 0.9);
}

TEST_CASE("soft_nms hard mode equals brute-force hard suppression") {
  std::mt19937_64 rng(7);
  NmsConfig cfg;
  cfg.sigma = 1e-12;  // below the hard-mode threshold
  cfg.score_floor = 1e-4;
  for (int trial = 0; trial < 300; ++trial) {
    const auto input = random_group(rng, 10);
    const auto ours = soft_nms(input, cfg);
    const auto expected = oracle::brute_force_hard_nms(input, cfg.score_floor);
    REQUIRE(ours.size() == expected.size());
    for (std::size_t i = 0; i < ours.size(); ++i) {
      CHECK(ours[i].segment == expected[i].segment);
      CHECK(ours[i].score == expected[i].score);
    }
  }
}

TEST_CASE("per-category overrides pick the right parameters") {
  NmsConfig cfg;
  cfg.sigma = 0.5;
  cfg.score_floor = 1e-4;
  cfg.per_category[3] = {0.1, 0.2};
  CHECK(cfg.sigma_for(3) == 0.1);
  CHECK(cfg.floor_for(3) == 0.2);
  CHECK(cfg.sigma_for(0) == 0.5);
  CHECK(cfg.floor_for(0) == 1e-4);
  cfg.per_category[4] = {std::nullopt, 0.3};
  CHECK(cfg.sigma_for(4) == 0.5);
  CHECK(cfg.floor_for(4) == 0.3);
}

TEST_CASE("soft_nms rejects mixed labels and bad config") {
  NmsConfig cfg;
  CHECK_THROWS_AS(soft_nms({{{0, 1}, 0, 0.9}, {{2, 3}, 1, 0.8}}, cfg), Error);
  NmsConfig bad;
  bad.sigma = -1.0;
  CHECK_THROWS_AS(soft_nms({{{0, 1}, 0, 0.9}}, bad), Error);
  NmsConfig bad_floor;
  bad_floor.score_floor = 1.0;
  CHECK_THROWS_AS(soft_nms({{{0, 1}, 0, 0.9}}, bad_floor), Error);
}

TEST_CASE("linear decay variant") {
  NmsConfig cfg;
  cfg.decay = NmsDecay::kLinear;
  const auto out = soft_nms({{{0.0, 1.0}, 0, 0.9}, {{0.1, 1.1}, 0, 0.8}}, cfg);
  REQUIRE(out.size() == 2);
  CHECK(out[1].score == doctest::Approx(0.8 * (1.0 - 0.9 / 1.1)).epsilon(1e-12));
}

TEST_CASE("apply_soft_nms groups per video and label") {
  PredictionSet set;
  set.labels = LabelSpace({"a", "b"}, false);
  set.results["v1"] = {{{0.0, 1.0}, 0, 0.9},
                       {{0.05, 1.0}, 1, 0.8},   // other label, untouched
                       {{0.02, 1.0}, 0, 0.85}};
  set.results["v2"] = {};
  NmsConfig cfg;
  cfg.sigma = 0.01;
  cfg.score_floor = 0.5;
  const auto out = apply_soft_nms(set, cfg);
  REQUIRE(out.results.count("v1") == 1);
  REQUIRE(out.results.count("v2") == 1);
  const auto& v1 = out.results.at("v1");
  REQUIRE(v1.size() == 2);  // the weaker label-0 detection is suppressed
  CHECK(v1[0].label == 0);
  CHECK(v1[0].score == 0.9);
  CHECK(v1[1].label == 1);
  CHECK(v1[1].score == 0.8);
  CHECK(out.results.at("v2").empty());
}
