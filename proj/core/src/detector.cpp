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

#include "attnguide/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "attnguide/error.hpp"
#include "distance_transform.hpp"

namespace attnguide {

void DetectorParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(edges.gradient_threshold > 0.0)) fail("gradient threshold must be positive");
  if (edges.orientation_bins < 2 || edges.orientation_bins > 64) fail("orientation bins must lie in [2, 64]");
  if (min_edgelets < 1 || max_edgelets < min_edgelets) fail("need 1 <= min_edgelets <= max_edgelets");
  if (scales.empty() || rotations_deg.empty()) fail("scales and rotations must not be empty");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) fail("scales must be positive");
  }
  for (double r : rotations_deg) {
    if (!std::isfinite(r)) fail("rotations must be finite");
  }
  if (stride < 1) fail("stride must be >= 1");
  if (max_shift < 0) fail("max shift must be >= 0");
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (!(threshold >= 0.0 && threshold <= 1.0)) fail("detection threshold must lie in [0, 1]");
}

namespace {

std::vector<Edgelet> select_edgelets(const EdgeMap& edges, int max_count) {
  struct Candidate {
    float magnitude;
    Edgelet e;
  };
  std::vector<Candidate> all;
  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      const auto b = edges.at(x, y);
      if (b == kNoEdge) continue;
      all.push_back({edges.magnitude[static_cast<std::size_t>(y) * edges.width + x],
                     {static_cast<std::int16_t>(x), static_cast<std::int16_t>(y), b}});
    }
  }
  const auto cap = static_cast<std::size_t>(max_count);
  if (all.size() <= cap) {
    std::vector<Edgelet> out;
    for (const auto& c : all) out.push_back(c.e);
    return out;
  }
  // Keep everything stronger than the cut-off magnitude; spread the remaining
  // budget evenly (in raster order) over the pixels tied at the cut-off.
  std::vector<float> mags;
  for (const auto& c : all) mags.push_back(c.magnitude);
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(cap - 1), mags.end(),
                   std::greater<>());
  const float cut = mags[cap - 1];
  std::vector<Edgelet> out, ties;
  for (const auto& c : all) {
    if (c.magnitude > cut) {
      out.push_back(c.e);
    } else if (c.magnitude == cut) {
      ties.push_back(c.e);
    }
  }
  const std::size_t need = cap - out.size();
  for (std::size_t j = 0; j < need; ++j) out.push_back(ties[j * ties.size() / need]);
  std::sort(out.begin(), out.end(), [](const Edgelet& a, const Edgelet& b) {
    return std::tie(a.y, a.x) < std::tie(b.y, b.x);
  });
  return out;
}

// exp(-sqrt(d2) / lambda) for d2 below the cut-off, zero beyond it.
std::vector<float> falloff_table(double lambda) {
  const auto max_d2 = static_cast<std::size_t>(std::ceil(15.0 * lambda * 15.0 * lambda));
  std::vector<float> table(max_d2 + 1);
  for (std::size_t d2 = 0; d2 <= max_d2; ++d2) {
    table[d2] = static_cast<float>(std::exp(-std::sqrt(static_cast<double>(d2)) / lambda));
  }
  return table;
}

double pose_rank(const Pose& p) {
  return std::abs(std::log(p.scale)) * 1e6 + std::abs(p.rotation_deg) * 1e3 +
         std::abs(p.dx) + std::abs(p.dy);
}

// Higher score wins; exact ties go to the pose closest to identity.
bool better(double score, const Pose& pose, double best_score, const Pose& best_pose) {
  if (score != best_score) return score > best_score;
  return pose_rank(pose) < pose_rank(best_pose);
}

}  // namespace

ObjectModel train_model(const Frame& frame, const SpatialAttention& attention,
                        std::string model_id, ModelSource source, Nanos trained_at,
                        const DetectorParams& params) {
  params.validate();
  const PixelBox& aoi = attention.aoi;
  if (frame.image.cols != kCanonicalWidth || frame.image.rows != kCanonicalHeight) {
    throw Error(ErrorCode::kPrecondition, "frame is not at the canonical resolution");
  }
  const cv::Mat crop = to_gray(frame.image)(aoi.rect());
  const EdgeMap edges = extract_edges(crop, params.edges);
  const auto count = edges.edge_count();
  if (count < static_cast<std::size_t>(params.min_edgelets)) {
    throw Error(ErrorCode::kInsufficientStructure,
                "frame " + std::to_string(frame.index) + " yields " + std::to_string(count) +
                    " edgelets, at least " + std::to_string(params.min_edgelets) + " needed");
  }
  ObjectModel model;
  model.model_id = std::move(model_id);
  model.source = std::move(source);
  model.trained_at = trained_at;
  model.template_width = aoi.width();
  model.template_height = aoi.height();
  model.orientation_bins = params.edges.orientation_bins;
  model.scales = params.scales;
  model.rotations_deg = params.rotations_deg;
  model.edgelets = select_edgelets(edges, params.max_edgelets);
  return model;
}

std::vector<Edgelet> transform_edgelets(const ObjectModel& model, const Pose& pose) {
  const double cx = (model.template_width - 1) / 2.0;
  const double cy = (model.template_height - 1) / 2.0;
  const double theta = pose.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta) * pose.scale, s = std::sin(theta) * pose.scale;
  const double step = std::numbers::pi / model.orientation_bins;
  std::vector<int> rotated_bin(static_cast<std::size_t>(model.orientation_bins));
  for (int b = 0; b < model.orientation_bins; ++b) {
    rotated_bin[static_cast<std::size_t>(b)] =
        quantize_orientation(b * step + theta, model.orientation_bins);
  }
  std::vector<Edgelet> out;
  out.reserve(model.edgelets.size());
  for (const auto& e : model.edgelets) {
    const double px = e.x - cx, py = e.y - cy;
    const double qx = cx + c * px - s * py + pose.dx;
    const double qy = cy + s * px + c * py + pose.dy;
    out.push_back({static_cast<std::int16_t>(std::floor(qx + 0.5)),
                   static_cast<std::int16_t>(std::floor(qy + 0.5)),
                   static_cast<std::uint8_t>(rotated_bin[e.bin])});
  }
  return out;
}

SearchIndex::SearchIndex(const Frame& frame, const PixelBox& aoi, const DetectorParams& params)
    : params_(params), aoi_(aoi), frame_index_(frame.index) {
  params_.validate();
  build(to_gray(frame.image)(aoi.rect()));
}

SearchIndex::SearchIndex(const cv::Mat& gray_crop, std::size_t frame_index, const PixelBox& aoi,
                         const DetectorParams& params)
    : params_(params), aoi_(aoi), frame_index_(frame_index) {
  params_.validate();
  build(to_gray(gray_crop));
}

void SearchIndex::build(const cv::Mat& gray_crop) {
  edges_ = extract_edges(gray_crop, params_.edges);
  const int bins = params_.edges.orientation_bins;
  const std::size_t npix = static_cast<std::size_t>(edges_.width) * edges_.height;

  std::vector<std::vector<std::int32_t>> dist(static_cast<std::size_t>(bins));
  std::vector<std::uint8_t> mask(npix);
  for (int b = 0; b < bins; ++b) {
    for (std::size_t i = 0; i < npix; ++i) mask[i] = edges_.bin[i] == b ? 1 : 0;
    dist[static_cast<std::size_t>(b)] =
        detail::squared_distance_transform(mask, edges_.width, edges_.height);
  }

  const auto table = falloff_table(params_.lambda);
  auto falloff = [&](std::int32_t d2) {
    return static_cast<std::size_t>(d2) < table.size() ? table[static_cast<std::size_t>(d2)] : 0.0f;
  };
  const auto neighbour_weight = static_cast<float>(std::cos(std::numbers::pi / bins));

  maps_.assign(static_cast<std::size_t>(bins), std::vector<float>(npix, 0.0f));
  for (int b = 0; b < bins; ++b) {
    const auto& same = dist[static_cast<std::size_t>(b)];
    const auto& lower = dist[static_cast<std::size_t>((b + bins - 1) % bins)];
    const auto& upper = dist[static_cast<std::size_t>((b + 1) % bins)];
    auto& map = maps_[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < npix; ++i) {
      map[i] = std::max({falloff(same[i]), neighbour_weight * falloff(lower[i]),
                         neighbour_weight * falloff(upper[i])});
    }
  }
}

double SearchIndex::score(const ObjectModel& model, const Pose& pose) const {
  if (model.edgelets.empty()) return 0.0;
  if (model.orientation_bins != params_.edges.orientation_bins) {
    throw Error(ErrorCode::kInvalidArgument, "model " + model.model_id +
                                                 " uses a different orientation quantisation");
  }
  double sum = 0.0;
  for (const auto& e : transform_edgelets(model, pose)) sum += lookup(e.x, e.y, e.bin);
  return sum / static_cast<double>(model.edgelets.size());
}

Detection SearchIndex::best_pose(const ObjectModel& model) const {
  if (model.orientation_bins != params_.edges.orientation_bins) {
    throw Error(ErrorCode::kInvalidArgument, "model " + model.model_id +
                                                 " uses a different orientation quantisation");
  }
  Detection best{model.model_id, -1.0, Pose{}, frame_index_};
  if (model.edgelets.empty()) {
    best.score = 0.0;
    return best;
  }
  const double inv_n = 1.0 / static_cast<double>(model.edgelets.size());
  const int shift = params_.max_shift;
  const int stride = params_.stride;

  const int w = edges_.width, h = edges_.height;
  const int bins = params_.edges.orientation_bins;

  // Edgelets of one scale/rotation pair as flat crop indices grouped by bin,
  // plus the shifts for which every edgelet stays inside the crop.
  struct Base {
    std::vector<Edgelet> edgelets;
    std::vector<std::vector<int>> index_by_bin;
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  };
  auto prepare = [&](std::vector<Edgelet> edgelets) {
    Base b;
    b.index_by_bin.resize(static_cast<std::size_t>(bins));
    b.min_x = b.min_y = std::numeric_limits<int>::max();
    b.max_x = b.max_y = std::numeric_limits<int>::min();
    for (const auto& e : edgelets) {
      b.index_by_bin[e.bin].push_back(e.y * w + e.x);
      b.min_x = std::min<int>(b.min_x, e.x);
      b.max_x = std::max<int>(b.max_x, e.x);
      b.min_y = std::min<int>(b.min_y, e.y);
      b.max_y = std::max<int>(b.max_y, e.y);
    }
    b.edgelets = std::move(edgelets);
    return b;
  };
  // Mean lookup value at the shift, or -1 once the partial sum shows it cannot
  // reach `floor` (each remaining edgelet adds at most 1).
  const double n = static_cast<double>(model.edgelets.size());
  auto evaluate = [&](const Base& base, int dx, int dy, double floor) {
    float sum = 0.0f;
    const bool inside = base.min_x + dx >= 0 && base.max_x + dx < w && base.min_y + dy >= 0 &&
                        base.max_y + dy < h;
    if (inside) {
      const int shift = dy * w + dx;
      const double need = floor * n - 0.01;
      std::size_t remaining = base.edgelets.size();
      for (int b = 0; b < bins; ++b) {
        const auto& group = base.index_by_bin[static_cast<std::size_t>(b)];
        const float* map = maps_[static_cast<std::size_t>(b)].data();
        for (int i : group) sum += map[i + shift];
        remaining -= group.size();
        if (static_cast<double>(sum) + static_cast<double>(remaining) < need) return -1.0;
      }
    } else {
      for (const auto& e : base.edgelets) sum += lookup(e.x + dx, e.y + dy, e.bin);
    }
    return static_cast<double>(sum) * inv_n;
  };

  // Offsets -shift..shift stepping by stride from 0 outwards, so 0 is always
  // on the grid.
  std::vector<int> offsets{0};
  for (int d = stride; d <= shift; d += stride) {
    offsets.push_back(-d);
    offsets.push_back(d);
  }
  std::sort(offsets.begin(), offsets.end());

  for (double scale : params_.scales) {
    for (double rot : params_.rotations_deg) {
      const auto base = prepare(transform_edgelets(model, Pose{0, 0, scale, rot}));
      Pose local{0, 0, scale, rot};
      double local_score = -1.0;
      for (int dy : offsets) {
        for (int dx : offsets) {
          const Pose p{dx, dy, scale, rot};
          const double sc = evaluate(base, dx, dy, std::max(local_score, best.score));
          if (better(sc, p, local_score, local)) {
            local_score = sc;
            local = p;
          }
        }
      }
      if (params_.refine && stride > 1) {
        const Pose centre = local;
        for (int dy = centre.dy - (stride - 1); dy <= centre.dy + (stride - 1); ++dy) {
          for (int dx = centre.dx - (stride - 1); dx <= centre.dx + (stride - 1); ++dx) {
            if (std::abs(dx) > shift || std::abs(dy) > shift) continue;
            const Pose p{dx, dy, scale, rot};
            const double sc = evaluate(base, dx, dy, std::max(local_score, best.score));
            if (better(sc, p, local_score, local)) {
              local_score = sc;
              local = p;
            }
          }
        }
      }
      if (better(local_score, local, best.score, best.pose)) {
        best.score = local_score;
        best.pose = local;
      }
    }
  }
  best.score = std::clamp(best.score, 0.0, 1.0);
  return best;
}

std::vector<Detection> detect(const SearchIndex& index, std::span<const ObjectModel> models) {
  if (models.empty()) throw Error(ErrorCode::kPrecondition, "detect needs at least one model");
  std::vector<Detection> out;
  for (const auto& model : models) {
    auto d = index.best_pose(model);
    if (d.score >= index.params().threshold) out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> detect(const Frame& frame, const SpatialAttention& attention,
                              std::span<const ObjectModel> models, const DetectorParams& params) {
  if (models.empty()) throw Error(ErrorCode::kPrecondition, "detect needs at least one model");
  const SearchIndex index(frame, attention.aoi, params);
  return detect(index, models);
}

}  // namespace attnguide
