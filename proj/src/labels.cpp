#include "tadkit/labels.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "tadkit/error.hpp"

namespace tadkit {

namespace {

bool has_background_suffix(const std::string& name) {
  const std::string suffix = kBackgroundSuffix;
  return name.size() > suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void check_names(const std::vector<std::string>& names, bool expanded) {
  if (names.empty()) throw Error("label space: no class names");
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw Error("label space: empty class name");
    if (!seen.insert(n).second) {
      throw Error("label space: duplicate class name '" + n + "'");
    }
  }
  if (expanded) {
    if (names.size() % 2 != 0) {
      throw Error("label space: expanded space must have even size");
    }
    const std::size_t n = names.size() / 2;
    for (std::size_t i = 0; i < n; ++i) {
      if (names[n + i] != names[i] + kBackgroundSuffix) {
        throw Error("label space: entry " + std::to_string(n + i) +
                    " is not the background counterpart of entry " +
                    std::to_string(i));
      }
    }
  }
}

}  // namespace

LabelSpace::LabelSpace(std::vector<std::string> names, bool expanded)
    : names_(std::move(names)), expanded_(expanded) {
  check_names(names_, expanded_);
}

const std::string& LabelSpace::name(std::size_t index) const {
  if (index >= names_.size()) {
    throw Error("label space: index " + std::to_string(index) + " out of range");
  }
  return names_[index];
}

std::optional<int> LabelSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

LabelSpace load_label_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("label file " + path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw Error("label file must be a JSON array of strings");
  std::vector<std::string> names;
  names.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_string()) throw Error("label file must contain only strings");
    names.push_back(item.get<std::string>());
  }
  // Detect an already-expanded space by its mirrored second half.
  bool expanded = !names.empty() && names.size() % 2 == 0;
  if (expanded) {
    const std::size_t n = names.size() / 2;
    for (std::size_t i = 0; i < n && expanded; ++i) {
      expanded = names[n + i] == names[i] + kBackgroundSuffix;
    }
  }
  return LabelSpace(std::move(names), expanded);
}

void write_label_space(const LabelSpace& labels, const std::filesystem::path& path) {
  nlohmann::json j = labels.names();
  std::ofstream out(path);
  if (!out) throw Error("cannot write label file: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing label file: " + path.string());
}

LabelSpace expand_label_space(const LabelSpace& base) {
  if (base.expanded()) {
    throw Error("expand_label_space: space is already expanded");
  }
  for (const auto& n : base.names()) {
    if (has_background_suffix(n)) {
      throw Error("expand_label_space: name '" + n +
                  "' already carries the background suffix");
    }
  }
  std::vector<std::string> names = base.names();
  names.reserve(base.size() * 2);
  for (std::size_t i = 0; i < base.size(); ++i) {
    names.push_back(base.names()[i] + kBackgroundSuffix);
  }
  return LabelSpace(std::move(names), true);
}

std::vector<double> fold_class_scores(const std::vector<double>& scores) {
  if (scores.empty() || scores.size() % 2 != 0) {
    throw Error("fold_class_scores: expected an even-length score vector");
  }
  const std::size_t n = scores.size() / 2;
  double foreground_mass = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0)) {
      throw Error("fold_class_scores: scores must be non-negative");
    }
    if (i < n) foreground_mass += scores[i];
  }
  std::vector<double> out(n);
  if (foreground_mass == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(n));
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = scores[i] / foreground_mass;
  return out;
}

}  // namespace tadkit
