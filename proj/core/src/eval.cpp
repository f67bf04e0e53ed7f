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

#include "attnguide/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "attnguide/error.hpp"
#include "json.hpp"
#include "text_io.hpp"

namespace attnguide {

using nlohmann::json;

Box box_around(Point2 center, double size) {
  const double h = size / 2.0;
  return {center.x - h, center.y - h, center.x + h, center.y + h};
}

double iou(const Box& a, const Box& b) {
  if (!(a.width() > 0 && a.height() > 0) || !(b.width() > 0 && b.height() > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "iou needs boxes with positive area");
  }
  const double iw = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
  const double ih = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

std::vector<std::string> GroundTruth::objects() const {
  std::set<std::string> s;
  for (const auto& l : label) {
    if (!l.empty()) s.insert(l);
  }
  for (const auto& i : interactions) s.insert(i.label);
  return {s.begin(), s.end()};
}

GroundTruth make_ground_truth(std::vector<std::optional<Point2>> target,
                              std::vector<std::string> label,
                              const std::vector<bool>& interaction_flag,
                              const std::vector<bool>& gaze_onset_flag) {
  const std::size_t n = target.size();
  if (label.size() != n || interaction_flag.size() != n || gaze_onset_flag.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "ground-truth columns differ in length");
  }
  GroundTruth gt;
  gt.target = std::move(target);
  gt.label = std::move(label);
  std::optional<std::size_t> last_onset;
  std::size_t f = 0;
  while (f < n) {
    if (gaze_onset_flag[f]) last_onset = f;
    if (!interaction_flag[f]) {
      ++f;
      continue;
    }
    Interaction in;
    in.start = f;
    in.label = gt.label[f];
    if (in.label.empty()) {
      throw Error(ErrorCode::kCorruptFile,
                  "interaction at frame " + std::to_string(f) + " has no object label");
    }
    in.gaze_onset = last_onset;
    last_onset.reset();
    std::size_t g = f;
    while (g + 1 < n && interaction_flag[g + 1] && gt.label[g + 1] == in.label) {
      ++g;
      if (gaze_onset_flag[g]) last_onset = g;
    }
    in.end = g;
    gt.interactions.push_back(in);
    f = g + 1;
  }
  return gt;
}

GroundTruth read_ground_truth_csv(const std::filesystem::path& path) {
  detail::CsvReader reader(path, {"frame_index", "target_x", "target_y", "object_label",
                                  "interaction_flag", "gaze_onset_flag"});
  std::vector<std::optional<Point2>> target;
  std::vector<std::string> label;
  std::vector<bool> interaction, onset;
  std::vector<std::string> f;
  auto flag = [&](std::size_t i) {
    const auto v = reader.int_field(f, i);
    if (v != 0 && v != 1) reader.fail("flags must be 0 or 1");
    return v == 1;
  };
  while (reader.next(f)) {
    if (reader.int_field(f, 0) != static_cast<std::int64_t>(target.size())) {
      reader.fail("frame_index out of sequence");
    }
    if (f[1].empty() != f[2].empty()) reader.fail("target_x and target_y must both be set or empty");
    if (f[1].empty()) {
      target.emplace_back();
    } else {
      const Point2 p{reader.double_field(f, 1), reader.double_field(f, 2)};
      if (p.x < 0 || p.y < 0 || p.x >= kCanonicalWidth || p.y >= kCanonicalHeight) {
        reader.fail("target outside the 640x360 raster");
      }
      target.emplace_back(p);
    }
    label.push_back(f[3]);
    interaction.push_back(flag(4));
    onset.push_back(flag(5));
  }
  if (target.empty()) throw Error(ErrorCode::kEmptyStream, path.string() + " has no rows");
  return make_ground_truth(std::move(target), std::move(label), interaction, onset);
}

void write_ground_truth_csv(const std::filesystem::path& path, const GroundTruth& truth) {
  std::vector<int> interaction(truth.size(), 0), onset(truth.size(), 0);
  for (const auto& in : truth.interactions) {
    for (std::size_t f = in.start; f <= in.end; ++f) interaction[f] = 1;
    if (in.gaze_onset) onset[*in.gaze_onset] = 1;
  }
  std::ostringstream out;
  out << "frame_index,target_x,target_y,object_label,interaction_flag,gaze_onset_flag\n";
  for (std::size_t f = 0; f < truth.size(); ++f) {
    out << f << ',';
    if (truth.target[f]) {
      out << detail::format_double(truth.target[f]->x) << ','
          << detail::format_double(truth.target[f]->y);
    } else {
      out << ',';
    }
    out << ',' << truth.label[f] << ',' << interaction[f] << ',' << onset[f] << '\n';
  }
  detail::write_file_atomic(path, out.str());
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

std::vector<std::optional<Box>> estimates_from_timeline(const AttentionTimeline& timeline,
                                                        Point2 point, double size) {
  std::vector<std::optional<Box>> out(timeline.size());
  for (std::size_t f = 0; f < timeline.size(); ++f) {
    if (is_attending(timeline.filtered[f])) out[f] = box_around(point, size);
  }
  return out;
}

DiscoveryResult object_discovery(std::span<const std::optional<Box>> estimates,
                                 const GroundTruth& truth, const DiscoveryParams& params) {
  if (estimates.size() != truth.size()) {
    throw Error(ErrorCode::kPrecondition, "estimates cover " + std::to_string(estimates.size()) +
                                              " frames, ground truth " +
                                              std::to_string(truth.size()));
  }
  if (params.persistence < 1) throw Error(ErrorCode::kInvalidArgument, "persistence must be >= 1");
  const std::size_t n = truth.size();
  const auto persistence = static_cast<std::size_t>(params.persistence);

  DiscoveryResult r;
  r.objects = truth.objects();
  std::map<std::string, std::size_t> object_index;
  for (std::size_t k = 0; k < r.objects.size(); ++k) object_index[r.objects[k]] = k;

  std::vector<bool> in_interaction(n, false);
  for (const auto& in : truth.interactions) {
    for (std::size_t f = in.start; f <= in.end && f < n; ++f) in_interaction[f] = true;
  }

  // Per frame: the object annotated there, its IoU with the estimate, and
  // whether the frame qualifies.
  std::vector<double> overlap(n, 0.0);
  std::vector<bool> qualifies(n, false);
  for (std::size_t f = 0; f < n; ++f) {
    if (!truth.target[f]) {
      if (in_interaction[f]) ++r.missing_truth_frames;
      continue;
    }
    if (!estimates[f] || truth.label[f].empty()) continue;
    overlap[f] = iou(*estimates[f], box_around(*truth.target[f], params.aoi_size));
    qualifies[f] = overlap[f] >= params.iou_threshold;
  }

  // Longest qualifying run for `object` within [lo, hi].
  auto longest = [&](const std::string& object, std::size_t lo, std::size_t hi) {
    std::size_t best = 0, run = 0;
    for (std::size_t f = lo; f <= hi; ++f) {
      run = (qualifies[f] && truth.label[f] == object) ? run + 1 : 0;
      best = std::max(best, run);
    }
    return best;
  };

  std::set<std::string> discovered;
  if (n > 0) {
    for (const auto& object : r.objects) {
      if (longest(object, 0, n - 1) >= persistence) discovered.insert(object);
    }
  }
  r.discovered.assign(discovered.begin(), discovered.end());

  std::size_t f = 0;
  while (f < n) {
    if (!estimates[f]) {
      ++f;
      continue;
    }
    std::size_t g = f;
    while (g + 1 < n && estimates[g + 1]) ++g;
    if (g - f + 1 >= persistence) {
      DeclaredRun run{f, g, std::nullopt, false};
      std::vector<double> sums(r.objects.size(), 0.0);
      for (std::size_t k = f; k <= g; ++k) {
        if (truth.target[k] && !truth.label[k].empty()) {
          sums[object_index.at(truth.label[k])] += overlap[k];
        }
      }
      double best = 0.0;
      for (std::size_t k = 0; k < sums.size(); ++k) {
        if (sums[k] > best) {
          best = sums[k];
          run.object = r.objects[k];
        }
      }
      run.correct = run.object && longest(*run.object, f, g) >= persistence;
      if (run.correct) ++r.correct;
      r.declared.push_back(run);
    }
    f = g + 1;
  }
  r.precision = r.declared.empty()
                    ? 0.0
                    : static_cast<double>(r.correct) / static_cast<double>(r.declared.size());
  r.recall = r.objects.empty() ? 0.0
                               : static_cast<double>(r.discovered.size()) /
                                     static_cast<double>(r.objects.size());
  return r;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bin width must be positive");
  if (values.empty()) return {};
  auto bin_of = [&](double v) { return static_cast<long long>(std::floor(v / bin_width + 1e-9)); };
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const long long lo = bin_of(*mn), hi = bin_of(*mx);
  std::vector<HistogramBin> out;
  for (long long b = lo; b <= hi; ++b) {
    out.push_back({static_cast<double>(b) * bin_width, static_cast<double>(b + 1) * bin_width, 0});
  }
  for (double v : values) ++out[static_cast<std::size_t>(bin_of(v) - lo)].count;
  return out;
}

LeadTimeReport lead_time_analysis(std::span<const Episode> episodes, const GroundTruth& truth,
                                  double fps, double histogram_bin_s) {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  LeadTimeReport r;
  std::vector<double> leads, lags;
  for (std::size_t i = 0; i < truth.interactions.size(); ++i) {
    const auto& in = truth.interactions[i];
    InteractionLead il;
    il.interaction = i;
    for (std::size_t k = 0; k < episodes.size(); ++k) {
      if (episodes[k].start <= in.start && episodes[k].end >= in.start) {
        il.episode = k;
        break;
      }
    }
    if (il.episode) {
      const auto& ep = episodes[*il.episode];
      il.lead_s = (static_cast<double>(in.start) - static_cast<double>(ep.start)) / fps;
      leads.push_back(*il.lead_s);
      if (in.gaze_onset) {
        il.gaze_lag_s = (static_cast<double>(ep.start) - static_cast<double>(*in.gaze_onset)) / fps;
        lags.push_back(*il.gaze_lag_s);
      }
      ++r.matched;
    } else {
      ++r.missed;
    }
    r.per_interaction.push_back(il);
  }
  r.lead = summarize(leads);
  r.gaze_lag = summarize(lags);
  r.lead_histogram = histogram(leads, histogram_bin_s);
  r.gaze_lag_histogram = histogram(lags, histogram_bin_s);
  return r;
}

LeadTimeReport lead_time_analysis(const AttentionTimeline& timeline, const GroundTruth& truth,
                                  double fps, double histogram_bin_s) {
  return lead_time_analysis(timeline.episodes, truth, fps, histogram_bin_s);
}

MultiUserReport multi_user_matrix(std::span<const UserDiscovery> users,
                                  std::span<const std::string> common_objects) {
  if (users.empty()) throw Error(ErrorCode::kPrecondition, "multi-user matrix needs >= 1 user");
  if (common_objects.empty()) throw Error(ErrorCode::kPrecondition, "no common objects");
  const std::set<std::string> common(common_objects.begin(), common_objects.end());
  if (common.size() != common_objects.size()) {
    throw Error(ErrorCode::kInvalidArgument, "common object labels must be unique");
  }

  std::ostringstream diff;
  for (const auto& u : users) {
    std::set<std::string> extra, missing;
    for (const auto& d : u.discovered) {
      if (!common.contains(d)) extra.insert(d);
    }
    if (!u.objects.empty()) {
      const std::set<std::string> own(u.objects.begin(), u.objects.end());
      for (const auto& o : own) {
        if (!common.contains(o)) extra.insert(o);
      }
      for (const auto& c : common) {
        if (!own.contains(c)) missing.insert(c);
      }
    }
    for (const auto& e : extra) diff << "  user " << u.user_id << ": + " << e << '\n';
    for (const auto& m : missing) diff << "  user " << u.user_id << ": - " << m << '\n';
  }
  if (!diff.str().empty()) {
    throw Error(ErrorCode::kLabelMismatch,
                "labels differ from the common object list (+ unexpected, - absent):\n" +
                    diff.str());
  }

  MultiUserReport r;
  r.objects.assign(common_objects.begin(), common_objects.end());
  for (const auto& u : users) r.users.push_back(u.user_id);
  r.hits.assign(r.objects.size(), std::vector<bool>(users.size(), false));
  r.per_user_count.assign(users.size(), 0);
  r.per_object_count.assign(r.objects.size(), 0);
  std::size_t total = 0;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const std::set<std::string> found(users[u].discovered.begin(), users[u].discovered.end());
    for (std::size_t o = 0; o < r.objects.size(); ++o) {
      if (!found.contains(r.objects[o])) continue;
      r.hits[o][u] = true;
      ++r.per_user_count[u];
      ++r.per_object_count[o];
      ++total;
    }
  }
  std::vector<double> counts(r.per_user_count.begin(), r.per_user_count.end());
  r.per_user = summarize(counts);
  r.pooled_recall =
      static_cast<double>(total) / static_cast<double>(r.objects.size() * users.size());
  return r;
}

std::string to_string(OverlapMode mode) {
  return mode == OverlapMode::kIntersectionOverUnion ? "iou" : "expert";
}

OverlapMode parse_overlap_mode(const std::string& text) {
  if (text == "iou") return OverlapMode::kIntersectionOverUnion;
  if (text == "expert") return OverlapMode::kIntersectionOverExpert;
  throw Error(ErrorCode::kInvalidArgument, "overlap mode must be 'iou' or 'expert'");
}

OverlapReport snippet_overlap(std::span<const FrameRange> automatic,
                              std::span<const FrameRange> expert, double fps, OverlapMode mode) {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  if (automatic.size() != expert.size()) {
    const auto lo = std::min(automatic.size(), expert.size());
    const auto hi = std::max(automatic.size(), expert.size());
    const char* side = automatic.size() > expert.size() ? "automatic" : "expert";
    throw Error(ErrorCode::kUnpairedCuts, std::string(side) + " cuts at indices " +
                                              std::to_string(lo) + ".." + std::to_string(hi - 1) +
                                              " have no partner (" +
                                              std::to_string(automatic.size()) + " automatic, " +
                                              std::to_string(expert.size()) + " expert)");
  }
  if (automatic.empty()) throw Error(ErrorCode::kPrecondition, "no cuts to compare");
  OverlapReport r;
  r.mode = mode;
  std::vector<double> auto_len, expert_len;
  for (std::size_t i = 0; i < automatic.size(); ++i) {
    const auto& a = automatic[i];
    const auto& e = expert[i];
    if (a.end < a.start || e.end < e.start) {
      throw Error(ErrorCode::kInvalidArgument, "cut " + std::to_string(i) + " ends before it starts");
    }
    const auto lo = std::max(a.start, e.start);
    const auto hi = std::min(a.end, e.end);
    const double inter = hi >= lo ? static_cast<double>(hi - lo + 1) : 0.0;
    const double denom = mode == OverlapMode::kIntersectionOverUnion
                             ? static_cast<double>(a.length() + e.length()) - inter
                             : static_cast<double>(e.length());
    r.per_pair_percent.push_back(100.0 * inter / denom);
    auto_len.push_back(static_cast<double>(a.end - a.start) / fps);
    expert_len.push_back(static_cast<double>(e.end - e.start) / fps);
  }
  r.mean_percent = summarize(r.per_pair_percent).mean;
  r.automatic_length_s = summarize(auto_len);
  r.expert_length_s = summarize(expert_len);
  return r;
}

OverlapReport snippet_overlap(std::span<const Snippet> automatic,
                              std::span<const FrameRange> expert, double fps, OverlapMode mode) {
  std::vector<FrameRange> ranges;
  for (const auto& s : automatic) ranges.push_back(s.media);
  return snippet_overlap(ranges, expert, fps, mode);
}

std::vector<FrameRange> read_cuts_csv(const std::filesystem::path& path) {
  detail::CsvReader reader(path, {"start", "end"});
  std::vector<FrameRange> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto a = reader.int_field(f, 0), b = reader.int_field(f, 1);
    if (a < 0 || b < a) reader.fail("cut needs 0 <= start <= end");
    out.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
  }
  return out;
}

void write_cuts_csv(const std::filesystem::path& path, std::span<const FrameRange> cuts) {
  std::ostringstream out;
  out << "start,end\n";
  for (const auto& c : cuts) out << c.start << ',' << c.end << '\n';
  detail::write_file_atomic(path, out.str());
}

namespace {

json stats_json(const SummaryStats& s) { return {{"count", s.count}, {"mean", s.mean}, {"sd", s.sd}}; }

json histogram_json(const std::vector<HistogramBin>& bins) {
  json out = json::array();
  for (const auto& b : bins) out.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string discovery_json(const DiscoveryResult& r, const std::string& user_id) {
  json runs = json::array();
  for (const auto& d : r.declared) {
    runs.push_back({{"start", d.start},
                    {"end", d.end},
                    {"object", d.object ? json(*d.object) : json(nullptr)},
                    {"correct", d.correct}});
  }
  json j = {{"metric", "object_discovery"},
            {"user_id", user_id},
            {"objects", r.objects},
            {"discovered", r.discovered},
            {"declared", runs},
            {"correct", r.correct},
            {"precision", r.precision},
            {"recall", r.recall},
            {"missing_truth_frames", r.missing_truth_frames}};
  return j.dump(2) + "\n";
}

UserDiscovery parse_discovery_json(const std::string& text, const std::string& origin) {
  try {
    const auto j = json::parse(text);
    UserDiscovery u;
    u.user_id = j.at("user_id").get<std::string>();
    u.objects = j.at("objects").get<std::vector<std::string>>();
    u.discovered = j.at("discovered").get<std::vector<std::string>>();
    if (u.user_id.empty()) u.user_id = origin;
    return u;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptFile, origin + ": " + e.what());
  }
}

std::string discovery_summary(const DiscoveryResult& r) {
  std::ostringstream out;
  out << "object discovery: precision " << fixed(r.precision, 2) << ", recall "
      << fixed(r.recall, 2) << " (" << r.discovered.size() << " of " << r.objects.size()
      << " objects, " << r.correct << " of " << r.declared.size()
      << " declared discoveries correct)\n";
  if (r.missing_truth_frames > 0) {
    out << "  " << r.missing_truth_frames
        << " frames inside interactions had no ground-truth target\n";
  }
  return out.str();
}

std::string lead_time_json(const LeadTimeReport& r) {
  json per = json::array();
  for (const auto& p : r.per_interaction) {
    per.push_back({{"interaction", p.interaction},
                   {"episode", p.episode ? json(*p.episode) : json(nullptr)},
                   {"lead_s", p.lead_s ? json(*p.lead_s) : json(nullptr)},
                   {"gaze_lag_s", p.gaze_lag_s ? json(*p.gaze_lag_s) : json(nullptr)}});
  }
  json j = {{"metric", "lead_time"},
            {"matched", r.matched},
            {"missed", r.missed},
            {"lead_s", stats_json(r.lead)},
            {"gaze_lag_s", stats_json(r.gaze_lag)},
            {"lead_histogram", histogram_json(r.lead_histogram)},
            {"gaze_lag_histogram", histogram_json(r.gaze_lag_histogram)},
            {"per_interaction", per}};
  return j.dump(2) + "\n";
}

std::string lead_time_summary(const LeadTimeReport& r) {
  std::ostringstream out;
  out << "interactions predicted " << fixed(r.lead.mean, 2) << " (+-" << fixed(r.lead.sd, 2)
      << ") s in advance; attention onset " << fixed(r.gaze_lag.mean, 2) << " (+-"
      << fixed(r.gaze_lag.sd, 2) << ") s after gaze fixation; " << r.matched << " matched, "
      << r.missed << " missed\n";
  return out.str();
}

std::string multi_user_json(const MultiUserReport& r) {
  json hits = json::array();
  for (const auto& row : r.hits) hits.push_back(row);
  json j = {{"metric", "multi_user_discovery"},
            {"objects", r.objects},
            {"users", r.users},
            {"hits", hits},
            {"per_user_count", r.per_user_count},
            {"per_object_count", r.per_object_count},
            {"per_user", stats_json(r.per_user)},
            {"pooled_recall", r.pooled_recall}};
  return j.dump(2) + "\n";
}

std::string multi_user_summary(const MultiUserReport& r) {
  std::ostringstream out;
  std::size_t width = 6;
  for (const auto& o : r.objects) width = std::max(width, o.size());
  out << std::string(width, ' ');
  for (const auto& u : r.users) out << ' ' << u;
  out << "  users\n";
  for (std::size_t o = 0; o < r.objects.size(); ++o) {
    out << r.objects[o] << std::string(width - r.objects[o].size(), ' ');
    for (std::size_t u = 0; u < r.users.size(); ++u) {
      const std::string cell = r.hits[o][u] ? "x" : ".";
      out << ' ' << cell << std::string(r.users[u].size() - 1, ' ');
    }
    out << "  " << r.per_object_count[o] << '\n';
  }
  out << "objects discovered per user " << fixed(r.per_user.mean, 2) << " (+-"
      << fixed(r.per_user.sd, 2) << "), pooled recall " << fixed(r.pooled_recall, 2) << '\n';
  return out.str();
}

std::string overlap_json(const OverlapReport& r) {
  json j = {{"metric", "snippet_overlap"},
            {"mode", to_string(r.mode)},
            {"per_pair_percent", r.per_pair_percent},
            {"mean_percent", r.mean_percent},
            {"automatic_length_s", stats_json(r.automatic_length_s)},
            {"expert_length_s", stats_json(r.expert_length_s)}};
  return j.dump(2) + "\n";
}

std::string overlap_table(const std::string& task, const OverlapReport& r) {
  auto len = [](const SummaryStats& s) { return fixed(s.mean, 2) + "(+-" + fixed(s.sd, 2) + ")"; };
  const std::string pct = fixed(r.mean_percent, 2) + "%";
  std::size_t tw = std::max<std::size_t>(task.size(), 4);
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
  std::ostringstream out;
  out << pad("Task", tw) << " | Video condition | Average video length (s) | Overlapping percentage ("
      << to_string(r.mode) << ")\n";
  out << pad(task, tw) << " | Automatic       | " << pad(len(r.automatic_length_s), 24) << " | "
      << pct << '\n';
  out << pad("", tw) << " | Expert          | " << pad(len(r.expert_length_s), 24) << " |\n";
  return out.str();
}

void check_labels(std::span<const std::string> expected, std::span<const std::string> actual,
                  const std::string& origin) {
  const std::set<std::string> want(expected.begin(), expected.end());
  const std::set<std::string> have(actual.begin(), actual.end());
  std::ostringstream diff;
  for (const auto& h : have) {
    if (!want.contains(h)) diff << "  + " << h << '\n';
  }
  for (const auto& w : want) {
    if (!have.contains(w)) diff << "  - " << w << '\n';
  }
  if (!diff.str().empty()) {
    throw Error(ErrorCode::kLabelMismatch,
                origin + ": labels differ from the expected objects (+ unexpected, - absent):\n" +
                    diff.str());
  }
}

}  // namespace attnguide
