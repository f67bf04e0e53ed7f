// Copyright 2026 The attnguide Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Edge-configuration object models and an oriented chamfer matcher.
//
// A model is a sparse set of edgelets (pixel position + quantised edge
// orientation) extracted from the AOI of a single frame. Detection compares a
// model with the edges of a new AOI: for every edgelet the distance to the
// nearest image edge of compatible orientation is looked up in a per-bin
// distance transform, turned into exp(-d / lambda) and weighted by the cosine
// of the orientation difference. The score of a pose is the mean over
// edgelets, so it lies in [0, 1] and equals 1 for a perfect overlay.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attnguide/attention.hpp"
#include "attnguide/types.hpp"

namespace attnguide {

struct EdgeParams {
  double gradient_threshold = 20.0;  // on the 0-255 intensity scale, per pixel
  int orientation_bins = 8;          // over [0, pi)
};

inline constexpr std::uint8_t kNoEdge = 0xff;

// Edge pixels of a grayscale crop after 3x3 smoothing, Sobel gradients and
// non-maximum suppression along the gradient direction.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bin;    // kNoEdge where there is no edge
  std::vector<float> magnitude;     // gradient magnitude at edge pixels, else 0

  std::uint8_t at(int x, int y) const { return bin[static_cast<std::size_t>(y) * width + x]; }
  std::size_t edge_count() const;
};

EdgeMap extract_edges(const cv::Mat& gray, const EdgeParams& params);

// Bin of an undirected edge orientation; bins are centred on k * pi / bins.
int quantize_orientation(double angle_rad, int bins);

// Converts to 8-bit single channel.
cv::Mat to_gray(const cv::Mat& image);

struct Edgelet {
  std::int16_t x = 0;  // template coordinates
  std::int16_t y = 0;
  std::uint8_t bin = 0;

  friend bool operator==(const Edgelet&, const Edgelet&) = default;
};

struct DetectorParams {
  EdgeParams edges;
  int min_edgelets = 50;
  int max_edgelets = 400;
  std::vector<double> scales{0.8, 1.0, 1.25};
  std::vector<double> rotations_deg{-15.0, 0.0, 15.0};
  int stride = 4;      // translation step of the coarse pose grid, px
  int max_shift = 24;  // translations range over [-max_shift, max_shift]
  // After the coarse grid, search +-(stride - 1) px at unit step around the
  // best translation of each scale/rotation pair.
  bool refine = true;
  double lambda = 5.0;  // distance fall-off, px
  double threshold = 0.7;

  void validate() const;
};

struct ModelSource {
  std::string user_id;
  std::string snippet_id;
  std::size_t training_frame = 0;

  friend bool operator==(const ModelSource&, const ModelSource&) = default;
};

struct ObjectModel {
  std::string model_id;
  ModelSource source;
  Nanos trained_at = 0;  // absolute time of the training frame
  int template_width = kAoiSize;
  int template_height = kAoiSize;
  int orientation_bins = 8;
  std::vector<double> scales;
  std::vector<double> rotations_deg;
  std::vector<Edgelet> edgelets;

  friend bool operator==(const ObjectModel&, const ObjectModel&) = default;
};

struct Pose {
  int dx = 0;
  int dy = 0;
  double scale = 1.0;
  double rotation_deg = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Detection {
  std::string model_id;
  double score = 0.0;
  Pose pose;
  std::size_t frame_index = 0;
};

// Throws Error(kInsufficientStructure) when the AOI holds fewer than
// params.min_edgelets edge pixels.
ObjectModel train_model(const Frame& frame, const SpatialAttention& attention,
                        std::string model_id, ModelSource source, Nanos trained_at,
                        const DetectorParams& params = {});

// Per-frame matching state: edges of the AOI and one orientation-compatible
// score map per bin. Built once per frame and shared by all models.
class SearchIndex {
 public:
  SearchIndex(const Frame& frame, const PixelBox& aoi, const DetectorParams& params);
  SearchIndex(const cv::Mat& gray_crop, std::size_t frame_index, const PixelBox& aoi,
              const DetectorParams& params);

  const EdgeMap& edges() const { return edges_; }
  const PixelBox& aoi() const { return aoi_; }
  std::size_t frame_index() const { return frame_index_; }
  const DetectorParams& params() const { return params_; }

  // Value in [0, 1] of a template edgelet of orientation `bin` placed at crop
  // pixel (x, y); 0 outside the crop.
  float lookup(int x, int y, int bin) const {
    if (x < 0 || y < 0 || x >= edges_.width || y >= edges_.height) return 0.0f;
    return maps_[static_cast<std::size_t>(bin)][static_cast<std::size_t>(y) * edges_.width + x];
  }

  double score(const ObjectModel& model, const Pose& pose) const;

  // Best pose over the configured grid (plus refinement). Always returns a
  // result; the score may be 0.
  Detection best_pose(const ObjectModel& model) const;

 private:
  void build(const cv::Mat& gray_crop);

  DetectorParams params_;
  PixelBox aoi_;
  std::size_t frame_index_ = 0;
  EdgeMap edges_;
  std::vector<std::vector<float>> maps_;
};

// Template edgelets moved by `pose`, in template (AOI-relative) pixels, with
// their rotated orientation bins.
std::vector<Edgelet> transform_edgelets(const ObjectModel& model, const Pose& pose);

// At most one detection per model, ordered by model as given; only poses
// scoring at least params.threshold are reported.
std::vector<Detection> detect(const Frame& frame, const SpatialAttention& attention,
                              std::span<const ObjectModel> models,
                              const DetectorParams& params = {});
std::vector<Detection> detect(const SearchIndex& index, std::span<const ObjectModel> models);

// Text model format, see model_io.cpp.
void write_model(const std::filesystem::path& path, const ObjectModel& model);
ObjectModel read_model(const std::filesystem::path& path);
std::string serialize_model(const ObjectModel& model);
ObjectModel parse_model(const std::string& text, const std::string& origin = "<memory>");

}  // namespace attnguide
