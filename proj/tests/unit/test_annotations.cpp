#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "tadkit/annotations.hpp"
#include "tadkit/error.hpp"

using namespace tadkit;

namespace {

const LabelSpace kLabels({"Surfing", "Archery"}, false);

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_ground_truth: minimal file") {
  const auto path = temp_file("tadkit_gt.json", R"({
    "database": {
      "v1": {
        "duration": 30.0,
        "subset": "validation",
        "annotations": [{"segment": [10, 20], "label": "Surfing"}]
      }
    }
  })");
  const auto ds = load_ground_truth(path, kLabels);
  CHECK(ds.videos.size() == 1);
  REQUIRE(ds.videos.count("v1") == 1);
  const auto& rec = ds.videos.at("v1");
  CHECK(rec.duration == 30.0);
  CHECK(rec.subset == "validation");
  REQUIRE(rec.annotations.size() == 1);
  CHECK(rec.annotations[0].segment == Segment{10, 20});
  CHECK(rec.annotations[0].label == 0);
  CHECK(ds.clamp_warnings == 0);
}

TEST_CASE("load_ground_truth: error paths") {
  CHECK_THROWS_WITH_AS(load_ground_truth("/missing/gt.json", kLabels),
                       doctest::Contains("/missing/gt.json"), Error);

  const auto bad_json = temp_file("tadkit_gt_bad.json", "{not json");
  CHECK_THROWS_AS(load_ground_truth(bad_json, kLabels), Error);

  const auto no_db = temp_file("tadkit_gt_nodb.json", R"({"videos": {}})");
  CHECK_THROWS_AS(load_ground_truth(no_db, kLabels), Error);

  const auto unknown = temp_file("tadkit_gt_unknown.json", R"({
    "database": {"v": {"duration": 10,
      "annotations": [{"segment": [1, 2], "label": "Juggling"}]}}
  })");
  CHECK_THROWS_WITH_AS(load_ground_truth(unknown, kLabels),
                       doctest::Contains("Juggling"), Error);

  const auto bad_duration = temp_file("tadkit_gt_dur.json", R"({
    "database": {"v": {"duration": 0, "annotations": []}}
  })");
  CHECK_THROWS_AS(load_ground_truth(bad_duration, kLabels), Error);
}

TEST_CASE("load_ground_truth: clamps out-of-range segments and counts them") {
  const auto path = temp_file("tadkit_gt_clamp.json", R"({
    "database": {"v": {"duration": 30,
      "annotations": [{"segment": [-1, 5], "label": "Surfing"},
                       {"segment": [2, 3], "label": "Archery"}]}}
  })");
  const auto ds = load_ground_truth(path, kLabels);
  CHECK(ds.clamp_warnings == 1);
  CHECK(ds.videos.at("v").annotations[0].segment == Segment{0, 5});
  CHECK(ds.videos.at("v").annotations[1].segment == Segment{2, 3});
}

TEST_CASE("load_predictions") {
  const auto path = temp_file("tadkit_pred.json", R"({
    "version": "demo",
    "results": {"v1": [{"segment": [5, 9], "label": "Surfing", "score": 0.7}]},
    "external_data": {}
  })");
  const auto set = load_predictions(path, kLabels);
  CHECK(set.version == "demo");
  REQUIRE(set.results.count("v1") == 1);
  REQUIRE(set.results.at("v1").size() == 1);
  CHECK(set.results.at("v1")[0] == ScoredDetection{{5, 9}, 0, 0.7});

  const auto empty = temp_file("tadkit_pred_empty.json", R"({"results": {}})");
  CHECK(load_predictions(empty, kLabels).results.empty());

  const auto bad_score = temp_file("tadkit_pred_score.json", R"({
    "results": {"v": [{"segment": [1, 2], "label": "Surfing", "score": 1.3}]}
  })");
  CHECK_THROWS_AS(load_predictions(bad_score, kLabels), Error);

  const auto bad_segment = temp_file("tadkit_pred_seg.json", R"({
    "results": {"v": [{"segment": [2, 2], "label": "Surfing", "score": 0.5}]}
  })");
  CHECK_THROWS_AS(load_predictions(bad_segment, kLabels), Error);
}

TEST_CASE("prediction round trip preserves exact values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_real_distribution<double> coord(0.0, 500.0);

  PredictionSet set;
  set.labels = kLabels;
  set.version = "VERSION 1.3";
  for (int v = 0; v < 4; ++v) {
    std::vector<ScoredDetection> dets;
    for (int d = 0; d < 16; ++d) {
      double a = coord(rng), b = coord(rng);
      if (a == b) continue;
      dets.push_back({{std::min(a, b), std::max(a, b)},
                      static_cast<int>(rng() % kLabels.size()), score(rng)});
    }
    set.results.emplace("video_" + std::to_string(v), std::move(dets));
  }
  set.results.emplace("empty_video", std::vector<ScoredDetection>{});

  const auto path = std::filesystem::temp_directory_path() / "tadkit_roundtrip.json";
  write_predictions(set, path);
  const auto loaded = load_predictions(path, kLabels);
  CHECK(loaded == set);

  // and a second pass stays byte-identical
  const auto path2 = std::filesystem::temp_directory_path() / "tadkit_roundtrip2.json";
  write_predictions(loaded, path2);
  std::ifstream f1(path), f2(path2);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
}

TEST_CASE("write_predictions emits empty results object") {
  PredictionSet set;
  set.labels = kLabels;
  const auto path = std::filesystem::temp_directory_path() / "tadkit_empty_out.json";
  write_predictions(set, path);
  const auto loaded = load_predictions(path, kLabels);
  CHECK(loaded.results.empty());
  CHECK(loaded == set);
}
