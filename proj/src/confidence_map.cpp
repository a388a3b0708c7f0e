#include "tadkit/confidence_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tadkit/error.hpp"

namespace tadkit {

namespace {

constexpr char kMagic[8] = {'T', 'A', 'D', 'C', 'M', 'A', 'P', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

void put_f32(std::string& buf, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u32(buf, bits);
}

class Reader {
 public:
  Reader(std::string data, std::string path)
      : data_(std::move(data)), path_(std::move(path)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) {
    if (data_.size() - pos_ < n) {
      throw Error("confidence map " + path_ + ": payload shorter than declared");
    }
  }
  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void ConfidenceMap::validate() const {
  if (num_durations == 0 || num_starts == 0) {
    throw Error("confidence map: grid must be at least 1x1");
  }
  if (!(stride > 0.0) || !std::isfinite(stride)) {
    throw Error("confidence map: stride must be positive");
  }
  if (grid.size() != num_durations * num_starts) {
    throw Error("confidence map: grid size does not match declared dimensions");
  }
  for (float v : grid) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw Error("confidence map: entry outside [0,1]");
    }
  }
}

ConfidenceMap read_confidence_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open confidence map: " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < sizeof(kMagic) ||
      std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error("confidence map " + path.string() + ": bad magic");
  }
  Reader r(data.substr(sizeof(kMagic)), path.string());

  ConfidenceMap map;
  map.num_durations = r.u32();
  map.num_starts = r.u32();
  map.stride = r.f64();
  const std::uint32_t id_len = r.u32();
  map.video_id = r.bytes(id_len);

  const std::size_t cells = map.num_durations * map.num_starts;
  if (r.remaining() != cells * 4) {
    throw Error("confidence map " + path.string() +
                ": payload does not match declared dimensions");
  }
  map.grid.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) map.grid[i] = r.f32();
  map.validate();
  return map;
}

void write_confidence_map(const ConfidenceMap& map, const std::filesystem::path& path) {
  map.validate();
  std::string buf;
  buf.reserve(sizeof(kMagic) + 20 + map.video_id.size() + map.grid.size() * 4);
  buf.append(kMagic, sizeof(kMagic));
  put_u32(buf, static_cast<std::uint32_t>(map.num_durations));
  put_u32(buf, static_cast<std::uint32_t>(map.num_starts));
  put_f64(buf, map.stride);
  put_u32(buf, static_cast<std::uint32_t>(map.video_id.size()));
  buf.append(map.video_id);
  for (float v : map.grid) put_f32(buf, v);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write confidence map: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("failed writing confidence map: " + path.string());
}

ConfidenceMap fuse_maps(const std::vector<ConfidenceMap>& maps, const FusionSpec& spec) {
  if (maps.empty()) throw Error("fuse_maps: no input maps");
  if (spec.weights.size() != maps.size()) {
    throw Error("fuse_maps: need one weight per map");
  }
  double weight_sum = 0.0;
  for (double w : spec.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("fuse_maps: weights must be non-negative");
    }
    weight_sum += w;
  }
  if (weight_sum == 0.0) throw Error("fuse_maps: all weights are zero");

  const ConfidenceMap& first = maps.front();
  first.validate();
  for (const auto& m : maps) {
    if (m.video_id != first.video_id || m.num_durations != first.num_durations ||
        m.num_starts != first.num_starts || m.stride != first.stride) {
      throw Error("fuse_maps: maps disagree on video/dimensions/stride");
    }
    m.validate();
  }

  ConfidenceMap out = first;
  std::vector<double> normalized(spec.weights.size());
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    normalized[i] = spec.weights[i] / weight_sum;
  }
  for (std::size_t c = 0; c < out.grid.size(); ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      acc += normalized[i] * static_cast<double>(maps[i].grid[c]);
    }
    out.grid[c] = static_cast<float>(acc);
  }
  return out;
}

std::vector<ScoredDetection> extract_top_k(const ConfidenceMap& map, std::size_t k,
                                           double video_duration) {
  map.validate();
  if (k == 0) throw Error("extract_top_k: k must be at least 1");
  if (!(video_duration > 0.0)) throw Error("extract_top_k: duration must be positive");

  std::vector<ScoredDetection> cells;
  cells.reserve(map.grid.size());
  for (std::size_t d = 0; d < map.num_durations; ++d) {
    for (std::size_t t = 0; t < map.num_starts; ++t) {
      const double start = static_cast<double>(t) * map.stride;
      const double end =
          std::min(static_cast<double>(t + d + 1) * map.stride, video_duration);
      if (!(start < end)) continue;
      cells.push_back({Segment{start, end}, -1, static_cast<double>(map.at(d, t))});
    }
  }
  std::stable_sort(cells.begin(), cells.end(), score_order);
  if (cells.size() > k) cells.resize(k);
  return cells;
}

}  // namespace tadkit
