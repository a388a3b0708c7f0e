#include "tadkit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tadkit/annotations.hpp"
#include "tadkit/confidence_map.hpp"
#include "tadkit/ensemble.hpp"
#include "tadkit/error.hpp"
#include "tadkit/evaluation.hpp"
#include "tadkit/fake_proposals.hpp"
#include "tadkit/labels.hpp"
#include "tadkit/losses.hpp"
#include "tadkit/nms.hpp"

namespace tadkit {

namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(std::string(what) + ": cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw Error(std::string(what) + ": empty list");
  return out;
}

// "lo:step:hi" inclusive sweep, e.g. the default "0.5:0.05:0.95".
std::vector<double> parse_threshold_sweep(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> parts;
  while (std::getline(ss, part, ':')) {
    try {
      parts.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error("--thresholds: cannot parse '" + part + "'");
    }
  }
  if (parts.size() != 3) throw Error("--thresholds: expected lo:step:hi");
  const double lo = parts[0], step = parts[1], hi = parts[2];
  if (!(step > 0.0) || !(lo <= hi)) throw Error("--thresholds: bad sweep");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double t = lo + step * i;
    if (t > hi + 1e-12) break;
    out.push_back(t);
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error("cannot write output: " + out_path);
  f << text;
  if (!f) throw Error("failed writing output: " + out_path);
}

// Label space for prediction files when none is supplied: the distinct
// label strings in the file, sorted.
LabelSpace infer_label_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("predictions: cannot open " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw Error("predictions " + path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("results") || !root["results"].is_object()) {
    throw Error("predictions " + path.string() + ": missing \"results\" object");
  }
  std::set<std::string> names;
  for (const auto& [video_id, dets] : root["results"].items()) {
    if (!dets.is_array()) continue;
    for (const auto& d : dets) {
      if (d.is_object() && d.contains("label") && d["label"].is_string()) {
        names.insert(d["label"].get<std::string>());
      }
    }
  }
  if (names.empty()) {
    // An empty prediction file still needs a non-empty space to validate.
    return LabelSpace({"__none__"}, false);
  }
  return LabelSpace(std::vector<std::string>(names.begin(), names.end()), false);
}

std::map<std::string, std::vector<double>> load_class_scores(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("class scores: cannot open " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw Error("class scores " + path.string() + ": " + e.what());
  }
  if (!root.is_object()) throw Error("class scores: expected an object");
  std::map<std::string, std::vector<double>> out;
  for (const auto& [video_id, probs] : root.items()) {
    if (!probs.is_array()) throw Error("class scores: entry must be an array");
    std::vector<double> v;
    v.reserve(probs.size());
    for (const auto& p : probs) {
      if (!p.is_number()) throw Error("class scores: entries must be numbers");
      v.push_back(p.get<double>());
    }
    out.emplace(video_id, std::move(v));
  }
  return out;
}

struct EnsembleSpec {
  std::vector<std::filesystem::path> prediction_paths;
  std::vector<double> weights;
  bool has_nms = false;
  double sigma = 0.5;
  double score_floor = 1e-4;
  std::map<std::string, NmsCategoryOverride> per_category;  // by label name
};

EnsembleSpec load_ensemble_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("ensemble spec: cannot open " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw Error("ensemble spec " + path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("models") || !root["models"].is_array() ||
      root["models"].empty()) {
    throw Error("ensemble spec: missing non-empty \"models\" array");
  }
  EnsembleSpec spec;
  const auto base_dir = path.parent_path();
  for (const auto& m : root["models"]) {
    if (!m.is_object() || !m.contains("predictions") || !m["predictions"].is_string()) {
      throw Error("ensemble spec: each model needs a \"predictions\" path");
    }
    std::filesystem::path p = m["predictions"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    spec.prediction_paths.push_back(p);
    spec.weights.push_back(m.contains("weight") ? m["weight"].get<double>() : 1.0);
  }
  if (root.contains("nms")) {
    const auto& n = root["nms"];
    if (!n.is_object()) throw Error("ensemble spec: \"nms\" must be an object");
    spec.has_nms = true;
    if (n.contains("sigma")) spec.sigma = n["sigma"].get<double>();
    if (n.contains("score_floor")) spec.score_floor = n["score_floor"].get<double>();
    if (n.contains("per_category")) {
      for (const auto& [name, ov] : n["per_category"].items()) {
        NmsCategoryOverride o;
        if (ov.contains("sigma")) o.sigma = ov["sigma"].get<double>();
        if (ov.contains("score_floor")) o.score_floor = ov["score_floor"].get<double>();
        spec.per_category.emplace(name, o);
      }
    }
  }
  return spec;
}

int run_evaluate(const std::string& gt_path, const std::string& pred_path,
                 const std::string& labels_path, std::size_t top_m,
                 const std::string& thresholds, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  const LabelSpace labels = load_label_space(labels_path);
  const GroundTruthDataset gt = load_ground_truth(gt_path, labels);
  if (gt.clamp_warnings > 0) {
    err << "warning: clipped " << gt.clamp_warnings
        << " annotation segment(s) to [0, duration]\n";
  }
  const PredictionSet preds = load_predictions(pred_path, labels);
  EvalConfig cfg;
  cfg.top_m = top_m;
  cfg.tiou_thresholds = parse_threshold_sweep(thresholds);
  const EvalReport report = evaluate(preds, gt, cfg);
  emit(report_to_json(report) + "\n", out_path, out);
  err << report_to_table(report);
  return 0;
}

int run_nms(const std::string& pred_path, const std::string& labels_path,
            double sigma, double score_floor, const std::string& out_path,
            std::ostream& out) {
  const LabelSpace labels = labels_path.empty() ? infer_label_space(pred_path)
                                                : load_label_space(labels_path);
  const PredictionSet preds = load_predictions(pred_path, labels);
  NmsConfig cfg;
  cfg.sigma = sigma;
  cfg.score_floor = score_floor;
  emit(predictions_to_string(apply_soft_nms(preds, cfg)), out_path, out);
  return 0;
}

int run_fuse_maps(const std::vector<std::string>& map_paths,
                  const std::string& weights_text, const std::string& out_path) {
  std::vector<ConfidenceMap> maps;
  maps.reserve(map_paths.size());
  for (const auto& p : map_paths) maps.push_back(read_confidence_map(p));
  FusionSpec spec;
  spec.weights = weights_text.empty()
                     ? std::vector<double>(maps.size(), 1.0)
                     : parse_number_list(weights_text, "--weights");
  write_confidence_map(fuse_maps(maps, spec), out_path);
  return 0;
}

int run_ensemble(const std::string& spec_path, const std::string& labels_path,
                 const std::string& out_path, std::ostream& out) {
  const EnsembleSpec spec = load_ensemble_spec(spec_path);
  const LabelSpace labels = load_label_space(labels_path);
  std::vector<PredictionSet> sets;
  sets.reserve(spec.prediction_paths.size());
  for (const auto& p : spec.prediction_paths) {
    sets.push_back(load_predictions(p, labels));
  }
  PredictionSet merged = merge_detections(sets, spec.weights);
  if (spec.has_nms) {
    NmsConfig cfg;
    cfg.sigma = spec.sigma;
    cfg.score_floor = spec.score_floor;
    for (const auto& [name, ov] : spec.per_category) {
      const auto idx = labels.index_of(name);
      if (!idx) throw Error("ensemble spec: unknown label '" + name + "'");
      cfg.per_category.emplace(*idx, ov);
    }
    merged = apply_soft_nms(merged, cfg);
  }
  emit(predictions_to_string(merged), out_path, out);
  return 0;
}

int run_fake_proposals(const std::string& gt_path, const std::string& labels_path,
                       const std::string& offsets_text, const std::string& out_path,
                       std::ostream& out) {
  const LabelSpace labels = load_label_space(labels_path);
  const GroundTruthDataset gt = load_ground_truth(gt_path, labels);
  const std::vector<double> offsets =
      offsets_text.empty() ? default_offsets()
                           : parse_number_list(offsets_text, "--offsets");
  json list = json::array();
  for (const auto& [video_id, rec] : gt.videos) {
    for (const auto& inst : rec.annotations) {
      for (const auto& fp : generate_fake_proposals(inst.segment, offsets)) {
        list.push_back({{"segment", {fp.segment.start, fp.segment.end}},
                        {"target", {fp.dstart, fp.dend}}});
      }
    }
  }
  emit(list.dump(2) + "\n", out_path, out);
  return 0;
}

// Frozen-weight view of the circle loss: the self-paced weights are
// constants of the differentiated function, so the finite-difference probe
// evaluates the double sum with the weights pinned at the input point.
double circle_value_frozen_alpha(const std::vector<double>& s_p,
                                 const std::vector<double>& s_n,
                                 const std::vector<double>& alpha_p,
                                 const std::vector<double>& alpha_n,
                                 const CircleParams& params) {
  double sum = 1.0;
  for (std::size_t j = 0; j < s_n.size(); ++j) {
    for (std::size_t i = 0; i < s_p.size(); ++i) {
      sum += std::exp(params.gamma * (alpha_n[j] * (s_n[j] - params.margin) -
                                      alpha_p[i] * (s_p[i] - (1.0 - params.margin))));
    }
  }
  return std::log(sum);
}

int run_loss_check(const std::string& batch_path, std::ostream& out) {
  std::ifstream in(batch_path);
  if (!in) throw Error("loss batch: cannot open " + batch_path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw Error("loss batch " + batch_path + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("s_p") || !root.contains("s_n")) {
    throw Error("loss batch: needs \"s_p\" and \"s_n\" arrays");
  }
  SimilarityBatch batch;
  batch.s_p = root["s_p"].get<std::vector<double>>();
  batch.s_n = root["s_n"].get<std::vector<double>>();
  const json params = root.contains("params") ? root["params"] : json::object();
  const std::string loss_kind =
      params.contains("loss") ? params.at("loss").get<std::string>() : "circle";
  const double h = 1e-6;

  if (loss_kind == "triplet") {
    if (batch.s_p.empty() || batch.s_n.empty()) {
      throw Error("loss batch: triplet check needs one s_p and one s_n value");
    }
    TripletParams tp;
    if (params.contains("m")) tp.margin = params.at("m").get<double>();
    const auto r = triplet_loss(batch.s_p[0], batch.s_n[0], tp);
    const double fd_p = (triplet_loss(batch.s_p[0] + h, batch.s_n[0], tp).value -
                         triplet_loss(batch.s_p[0] - h, batch.s_n[0], tp).value) /
                        (2 * h);
    const double fd_n = (triplet_loss(batch.s_p[0], batch.s_n[0] + h, tp).value -
                         triplet_loss(batch.s_p[0], batch.s_n[0] - h, tp).value) /
                        (2 * h);
    const double disc =
        std::max(std::abs(r.grad_s_p - fd_p), std::abs(r.grad_s_n - fd_n));
    out << "value " << fmt9(r.value) << "\n";
    out << "max_grad_fd_discrepancy " << fmt9(disc) << "\n";
    return 0;
  }
  if (loss_kind != "circle") throw Error("loss batch: unknown loss '" + loss_kind + "'");

  CircleParams cp;
  if (params.contains("m")) cp.margin = params.at("m").get<double>();
  if (params.contains("gamma")) cp.gamma = params.at("gamma").get<double>();
  const auto r = circle_loss(batch, cp);

  std::vector<double> alpha_p(batch.s_p.size()), alpha_n(batch.s_n.size());
  for (std::size_t i = 0; i < batch.s_p.size(); ++i) {
    alpha_p[i] = std::max(1.0 + cp.margin - batch.s_p[i], 0.0);
  }
  for (std::size_t j = 0; j < batch.s_n.size(); ++j) {
    alpha_n[j] = std::max(batch.s_n[j] + cp.margin, 0.0);
  }
  double disc = 0.0;
  auto probe = [&](std::vector<double>& v, std::size_t idx, double analytic) {
    const double saved = v[idx];
    v[idx] = saved + h;
    const double hi = circle_value_frozen_alpha(batch.s_p, batch.s_n, alpha_p, alpha_n, cp);
    v[idx] = saved - h;
    const double lo = circle_value_frozen_alpha(batch.s_p, batch.s_n, alpha_p, alpha_n, cp);
    v[idx] = saved;
    disc = std::max(disc, std::abs(analytic - (hi - lo) / (2 * h)));
  };
  for (std::size_t i = 0; i < batch.s_p.size(); ++i) probe(batch.s_p, i, r.grad_s_p[i]);
  for (std::size_t j = 0; j < batch.s_n.size(); ++j) probe(batch.s_n, j, r.grad_s_n[j]);

  out << "value " << fmt9(r.value) << "\n";
  out << "max_grad_fd_discrepancy " << fmt9(disc) << "\n";
  return 0;
}

int run_fold_labels(const std::string& labels_path, bool expand,
                    const std::string& scores_path, const std::string& out_path,
                    std::ostream& out) {
  const LabelSpace labels = load_label_space(labels_path);
  if (expand) {
    const LabelSpace big = expand_label_space(labels);
    emit(json(big.names()).dump(2) + "\n", out_path, out);
    return 0;
  }
  if (scores_path.empty()) {
    throw Error("fold-labels: pass --expand or --scores <file>");
  }
  if (!labels.expanded()) {
    throw Error("fold-labels: --scores requires an expanded label space");
  }
  json folded = json::object();
  for (const auto& [video_id, probs] : load_class_scores(scores_path)) {
    if (probs.size() != labels.size()) {
      throw Error("fold-labels: score vector for '" + video_id +
                  "' does not match the label space size");
    }
    folded[video_id] = fold_class_scores(probs);
  }
  emit(folded.dump(2) + "\n", out_path, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal action detection post-processing and evaluation toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for randomized stages (reserved)");

  std::string gt_path, pred_path, labels_path, out_path, thresholds = "0.5:0.05:0.95";
  std::string weights_text, offsets_text, spec_path, scores_path, batch_path;
  std::vector<std::string> map_paths;
  std::size_t top_m = 120;
  double sigma = 0.5, score_floor = 1e-4;
  bool expand = false;

  auto* cmd_eval = app.add_subcommand("evaluate", "Detection mAP over a tIoU sweep");
  cmd_eval->add_option("--gt", gt_path, "Ground-truth JSON")->required();
  cmd_eval->add_option("--pred", pred_path, "Prediction JSON")->required();
  cmd_eval->add_option("--labels", labels_path, "Label-space JSON")->required();
  cmd_eval->add_option("--top-m", top_m, "Detections kept per video");
  cmd_eval->add_option("--thresholds", thresholds, "tIoU sweep lo:step:hi");
  cmd_eval->add_option("--out", out_path, "Report JSON path (default: stdout)");

  auto* cmd_nms = app.add_subcommand("nms", "Per-category soft-NMS");
  cmd_nms->add_option("--pred", pred_path, "Prediction JSON")->required();
  cmd_nms->add_option("--labels", labels_path, "Label-space JSON (optional)");
  cmd_nms->add_option("--sigma", sigma, "Gaussian decay scale");
  cmd_nms->add_option("--score-floor", score_floor, "Minimum retained score");
  cmd_nms->add_option("--out", out_path, "Output JSON path (default: stdout)");

  auto* cmd_fuse = app.add_subcommand("fuse-maps", "Weighted confidence-map fusion");
  cmd_fuse->add_option("--maps", map_paths, "Input map files")->required()->expected(-1);
  cmd_fuse->add_option("--weights", weights_text, "Comma-separated weights");
  cmd_fuse->add_option("--out", out_path, "Output map file")->required();

  auto* cmd_ens = app.add_subcommand("ensemble", "Merge model predictions per spec file");
  cmd_ens->add_option("--spec", spec_path, "Ensemble spec JSON")->required();
  cmd_ens->add_option("--labels", labels_path, "Label-space JSON")->required();
  cmd_ens->add_option("--out", out_path, "Output JSON path (default: stdout)");

  auto* cmd_fake = app.add_subcommand("fake-proposals",
                                      "Boundary-offset proposals with regression targets");
  cmd_fake->add_option("--gt", gt_path, "Ground-truth JSON")->required();
  cmd_fake->add_option("--labels", labels_path, "Label-space JSON")->required();
  cmd_fake->add_option("--offsets", offsets_text, "Comma-separated boundary fractions");
  cmd_fake->add_option("--out", out_path, "Output JSON path (default: stdout)");

  auto* cmd_loss = app.add_subcommand("loss-check",
                                      "Loss value and gradient/finite-difference gap");
  cmd_loss->add_option("batch", batch_path, "Batch JSON file")->required();

  auto* cmd_fold = app.add_subcommand("fold-labels",
                                      "Expand a label space or fold expanded scores");
  cmd_fold->add_option("--labels", labels_path, "Label-space JSON")->required();
  cmd_fold->add_flag("--expand", expand, "Write the background-expanded space");
  cmd_fold->add_option("--scores", scores_path, "Class-score JSON to fold");
  cmd_fold->add_option("--out", out_path, "Output path (default: stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (cmd_eval->parsed()) {
      return run_evaluate(gt_path, pred_path, labels_path, top_m, thresholds,
                          out_path, out, err);
    }
    if (cmd_nms->parsed()) {
      return run_nms(pred_path, labels_path, sigma, score_floor, out_path, out);
    }
    if (cmd_fuse->parsed()) return run_fuse_maps(map_paths, weights_text, out_path);
    if (cmd_ens->parsed()) return run_ensemble(spec_path, labels_path, out_path, out);
    if (cmd_fake->parsed()) {
      return run_fake_proposals(gt_path, labels_path, offsets_text, out_path, out);
    }
    if (cmd_loss->parsed()) return run_loss_check(batch_path, out);
    if (cmd_fold->parsed()) {
      return run_fold_labels(labels_path, expand, scores_path, out_path, out);
    }
    err << "error: no subcommand\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tadkit
