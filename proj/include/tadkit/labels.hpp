#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tadkit {

// Suffix appended to a class name to form its background counterpart.
inline constexpr const char* kBackgroundSuffix = "--background";

// Ordered set of class names. An expanded space holds 2N names where entry
// i+N is the background counterpart of entry i.
class LabelSpace {
 public:
  LabelSpace() = default;
  LabelSpace(std::vector<std::string> names, bool expanded);

  const std::vector<std::string>& names() const { return names_; }
  bool expanded() const { return expanded_; }
  std::size_t size() const { return names_.size(); }
  // Number of foreground classes (size/2 when expanded).
  std::size_t base_count() const {
    return expanded_ ? names_.size() / 2 : names_.size();
  }

  const std::string& name(std::size_t index) const;
  std::optional<int> index_of(const std::string& name) const;

  friend bool operator==(const LabelSpace& a, const LabelSpace& b) {
    return a.names_ == b.names_ && a.expanded_ == b.expanded_;
  }

 private:
  std::vector<std::string> names_;
  bool expanded_ = false;
};

// Reads a JSON array of class-name strings. The space is flagged expanded
// when the second half mirrors the first half with the background suffix.
LabelSpace load_label_space(const std::filesystem::path& path);
void write_label_space(const LabelSpace& labels, const std::filesystem::path& path);

// Doubles a base space: N foreground names followed by their background
// counterparts "<name>--background".
LabelSpace expand_label_space(const LabelSpace& base);

// Collapses a score vector over an expanded space (length 2N) back to the
// N foreground classes: background mass is discarded and the foreground
// probabilities renormalized. All-zero foreground falls back to uniform.
std::vector<double> fold_class_scores(const std::vector<double>& scores);

}  // namespace tadkit
