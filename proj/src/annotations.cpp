#include "tadkit/annotations.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tadkit/error.hpp"

namespace tadkit {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw Error(std::string(what) + ": cannot open " + path.string());
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

Segment parse_segment(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(context + ": segment must be a [start, end] number pair");
  }
  Segment s{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(s.start) || !std::isfinite(s.end)) {
    throw Error(context + ": segment coordinates must be finite");
  }
  return s;
}

int parse_label(const json& j, const LabelSpace& labels, const std::string& context) {
  if (!j.is_string()) throw Error(context + ": label must be a string");
  const std::string name = j.get<std::string>();
  if (auto idx = labels.index_of(name)) return *idx;
  throw Error(context + ": unknown label '" + name + "'");
}

}  // namespace

GroundTruthDataset load_ground_truth(const std::filesystem::path& path,
                                     const LabelSpace& labels) {
  const json root = parse_file(path, "ground truth");
  if (!root.is_object() || !root.contains("database") || !root["database"].is_object()) {
    throw Error("ground truth " + path.string() + ": missing \"database\" object");
  }

  GroundTruthDataset ds;
  ds.labels = labels;
  for (const auto& [video_id, entry] : root["database"].items()) {
    const std::string ctx = "video '" + video_id + "'";
    if (!entry.is_object() || !entry.contains("duration") || !entry["duration"].is_number()) {
      throw Error(ctx + ": missing numeric \"duration\"");
    }
    VideoRecord rec;
    rec.duration = entry["duration"].get<double>();
    if (!(rec.duration > 0.0) || !std::isfinite(rec.duration)) {
      throw Error(ctx + ": duration must be positive");
    }
    if (entry.contains("subset")) {
      if (!entry["subset"].is_string()) throw Error(ctx + ": subset must be a string");
      rec.subset = entry["subset"].get<std::string>();
    }
    if (entry.contains("annotations")) {
      if (!entry["annotations"].is_array()) {
        throw Error(ctx + ": annotations must be an array");
      }
      for (const auto& ann : entry["annotations"]) {
        if (!ann.is_object() || !ann.contains("segment") || !ann.contains("label")) {
          throw Error(ctx + ": annotation needs \"segment\" and \"label\"");
        }
        GtInstance inst;
        inst.segment = parse_segment(ann["segment"], ctx);
        inst.label = parse_label(ann["label"], labels, ctx);
        if (!(inst.segment.start < inst.segment.end)) {
          throw Error(ctx + ": annotation segment has start >= end");
        }
        // Real annotation files contain out-of-range boundaries; clip and count.
        if (inst.segment.start < 0.0 || inst.segment.end > rec.duration) {
          inst.segment = clamp_segment(inst.segment, rec.duration);
          ++ds.clamp_warnings;
        }
        rec.annotations.push_back(inst);
      }
    }
    ds.videos.emplace(video_id, std::move(rec));
  }
  return ds;
}

PredictionSet load_predictions(const std::filesystem::path& path,
                               const LabelSpace& labels) {
  const json root = parse_file(path, "predictions");
  if (!root.is_object() || !root.contains("results") || !root["results"].is_object()) {
    throw Error("predictions " + path.string() + ": missing \"results\" object");
  }

  PredictionSet set;
  set.labels = labels;
  if (root.contains("version")) {
    if (!root["version"].is_string()) {
      throw Error("predictions: version must be a string");
    }
    set.version = root["version"].get<std::string>();
  }
  for (const auto& [video_id, dets] : root["results"].items()) {
    const std::string ctx = "video '" + video_id + "'";
    if (!dets.is_array()) throw Error(ctx + ": results entry must be an array");
    std::vector<ScoredDetection> list;
    list.reserve(dets.size());
    for (const auto& d : dets) {
      if (!d.is_object() || !d.contains("segment") || !d.contains("label") ||
          !d.contains("score")) {
        throw Error(ctx + ": detection needs \"segment\", \"label\", \"score\"");
      }
      ScoredDetection det;
      det.segment = parse_segment(d["segment"], ctx);
      if (!(det.segment.start < det.segment.end)) {
        throw Error(ctx + ": detection segment has start >= end");
      }
      det.label = parse_label(d["label"], labels, ctx);
      if (!d["score"].is_number()) throw Error(ctx + ": score must be a number");
      det.score = d["score"].get<double>();
      if (!(det.score >= 0.0 && det.score <= 1.0)) {
        throw Error(ctx + ": score " + std::to_string(det.score) +
                    " outside [0,1]");
      }
      list.push_back(det);
    }
    set.results.emplace(video_id, std::move(list));
  }
  return set;
}

std::string predictions_to_string(const PredictionSet& set) {
  json results = json::object();
  for (const auto& [video_id, dets] : set.results) {
    json list = json::array();
    for (const auto& d : dets) {
      list.push_back({{"segment", {d.segment.start, d.segment.end}},
                      {"label", set.labels.name(static_cast<std::size_t>(d.label))},
                      {"score", d.score}});
    }
    results[video_id] = std::move(list);
  }
  json root = {{"version", set.version},
               {"results", std::move(results)},
               {"external_data", json::object()}};
  return root.dump(2) + "\n";
}

void write_predictions(const PredictionSet& set, const std::filesystem::path& path) {
  const std::string text = predictions_to_string(set);
  std::ofstream out(path);
  if (!out) throw Error("cannot write predictions: " + path.string());
  out << text;
  if (!out) throw Error("failed writing predictions: " + path.string());
}

}  // namespace tadkit
