// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/patches.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sss/log.hpp"

namespace sss {

std::vector<CorrespondenceGroup> group_keypoints(const std::vector<KeypointCorrespondence>& correspondences,
                                                 std::size_t pings_per_group, std::size_t min_size) {
  if (pings_per_group == 0) throw DomainError("pings_per_group must be > 0");
  std::map<std::size_t, CorrespondenceGroup> windows;
  for (const auto& c : correspondences) {
    if (c.kp_a.ping < 0 || c.kp_a.bin < 0 || c.kp_b.ping < 0 || c.kp_b.bin < 0) {
      throw ShapeError("negative keypoint coordinate in correspondence");
    }
    const std::size_t id = static_cast<std::size_t>(c.kp_a.ping) / pings_per_group;
    auto& g = windows[id];
    g.id = id;
    g.members.push_back(c);
  }
  std::vector<CorrespondenceGroup> out;
  for (auto& [id, g] : windows) {
    if (g.members.size() >= min_size) out.push_back(std::move(g));
  }
  return out;
}

CorrespondenceGroup map_group(const CorrespondenceGroup& group, const TransformMeta& meta_a,
                              const TransformMeta& meta_b) {
  CorrespondenceGroup out;
  out.id = group.id;
  for (const auto& c : group.members) {
    const auto a = map_keypoint(c.kp_a, meta_a);
    const auto b = map_keypoint(c.kp_b, meta_b);
    if (!a || !b) continue;
    KeypointCorrespondence mapped = c;
    mapped.kp_a = *a;
    mapped.kp_b = *b;
    out.members.push_back(mapped);
  }
  return out;
}

std::string provenance_label(std::optional<LambertianLaw> law) {
  return law ? "canonical:" + std::string(to_string(*law)) : "raw";
}

namespace {

// One axis of the window rule: [lo - margin, hi + margin], widened to at
// least 3 around the centre, then clipped to [0, extent).
std::pair<long, long> axis_range(long lo, long hi, long margin, long extent, bool& clipped) {
  long a = lo - margin;
  long b = hi + margin;
  if (b - a + 1 < 3) {
    const long centre = (lo + hi) / 2;
    a = std::min(a, centre - 1);
    b = std::max(b, centre + 1);
  }
  if (a < 0) {
    a = 0;
    clipped = true;
  }
  if (b > extent - 1) {
    b = extent - 1;
    clipped = true;
  }
  return {a, b - a + 1};
}

}  // namespace

Window keypoint_window(const std::vector<PixelCoord>& keypoints, long margin, std::size_t image_rows,
                       std::size_t image_cols, bool& clipped) {
  if (keypoints.empty()) throw DomainError("cannot build a window around zero keypoints");
  if (margin < 0) throw DomainError("margin must be >= 0");
  long r0 = keypoints.front().ping, r1 = r0, c0 = keypoints.front().bin, c1 = c0;
  for (const auto& kp : keypoints) {
    if (kp.ping < 0 || kp.bin < 0 || static_cast<std::size_t>(kp.ping) >= image_rows ||
        static_cast<std::size_t>(kp.bin) >= image_cols) {
      std::ostringstream msg;
      msg << "keypoint (" << kp.ping << ", " << kp.bin << ") outside " << image_rows << " x "
          << image_cols << " image";
      throw ShapeError(msg.str());
    }
    r0 = std::min(r0, kp.ping);
    r1 = std::max(r1, kp.ping);
    c0 = std::min(c0, kp.bin);
    c1 = std::max(c1, kp.bin);
  }
  clipped = false;
  const auto [row, height] = axis_range(r0, r1, margin, static_cast<long>(image_rows), clipped);
  const auto [col, width] = axis_range(c0, c1, margin, static_cast<long>(image_cols), clipped);
  return Window{row, col, height, width};
}

Matrix<double> crop(const Matrix<double>& image, const Window& w) {
  if (w.row < 0 || w.col < 0 || w.height <= 0 || w.width <= 0 ||
      static_cast<std::size_t>(w.row + w.height) > image.rows() ||
      static_cast<std::size_t>(w.col + w.width) > image.cols()) {
    throw ShapeError("crop window outside image");
  }
  Matrix<double> out(static_cast<std::size_t>(w.height), static_cast<std::size_t>(w.width));
  for (long r = 0; r < w.height; ++r) {
    const auto src = image.row(static_cast<std::size_t>(w.row + r)).subspan(static_cast<std::size_t>(w.col),
                                                                            static_cast<std::size_t>(w.width));
    std::copy(src.begin(), src.end(), out.row(static_cast<std::size_t>(r)).begin());
  }
  return out;
}

PatchPair extract_patch_pair(const Matrix<double>& image_a, const Matrix<double>& image_b,
                             const CorrespondenceGroup& group, long margin,
                             const std::string& provenance) {
  if (group.members.empty()) throw DomainError("cannot extract a patch pair from an empty group");
  std::vector<PixelCoord> kps_a;
  std::vector<PixelCoord> kps_b;
  for (const auto& c : group.members) {
    kps_a.push_back(c.kp_a);
    kps_b.push_back(c.kp_b);
  }

  PatchPair pair;
  pair.group_id = group.id;
  pair.provenance = provenance;
  pair.window_a = keypoint_window(kps_a, margin, image_a.rows(), image_a.cols(), pair.clipped_a);
  pair.window_b = keypoint_window(kps_b, margin, image_b.rows(), image_b.cols(), pair.clipped_b);
  pair.patch_a = crop(image_a, pair.window_a);
  pair.patch_b = crop(image_b, pair.window_b);
  for (const auto& kp : kps_a) pair.keypoints_a.push_back({kp.ping - pair.window_a.row, kp.bin - pair.window_a.col});
  for (const auto& kp : kps_b) pair.keypoints_b.push_back({kp.ping - pair.window_b.row, kp.bin - pair.window_b.col});
  return pair;
}

std::vector<KeypointCorrespondence> select_correspondences(const std::vector<KeypointCorrespondence>& all,
                                                           const std::string& line_a, const std::string& line_b,
                                                           Side side) {
  std::vector<KeypointCorrespondence> out;
  for (const auto& c : all) {
    if (c.side != side) continue;
    if (c.line_a == line_a && c.line_b == line_b) {
      out.push_back(c);
    } else if (c.line_a == line_b && c.line_b == line_a) {
      out.push_back({line_a, line_b, side, c.kp_b, c.kp_a});
    }
  }
  return out;
}

std::vector<PatchPair> build_patch_pairs(const Matrix<double>& image_a, const Matrix<double>& image_b,
                                         const std::vector<KeypointCorrespondence>& correspondences,
                                         const TransformMeta* meta_a, const TransformMeta* meta_b,
                                         std::size_t pings_per_group, long margin,
                                         const std::string& provenance) {
  if ((meta_a == nullptr) != (meta_b == nullptr)) {
    throw DomainError("pass transform metadata for both images or for neither");
  }
  std::vector<PatchPair> pairs;
  std::size_t skipped = 0;
  for (const auto& group : group_keypoints(correspondences, pings_per_group)) {
    const CorrespondenceGroup g = meta_a ? map_group(group, *meta_a, *meta_b) : group;
    if (g.members.empty()) {
      ++skipped;
      continue;
    }
    pairs.push_back(extract_patch_pair(image_a, image_b, g, margin, provenance));
  }
  if (skipped > 0) warn(std::to_string(skipped) + " group(s) lost every keypoint in mapping and were skipped");
  return pairs;
}

}  // namespace sss
