// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sss/core.hpp"
#include "sss/pipeline.hpp"

namespace sss {

/// The same world point seen in two survey lines.
struct KeypointCorrespondence {
  std::string line_a;
  std::string line_b;
  Side side = Side::Starboard;
  PixelCoord kp_a;
  PixelCoord kp_b;

  bool operator==(const KeypointCorrespondence&) const = default;
};

/// Correspondences whose line-a pings fall in one along-track window.
struct CorrespondenceGroup {
  std::size_t id = 0;  // window index: ping_a / pings_per_group
  std::vector<KeypointCorrespondence> members;
};

inline constexpr std::size_t kMinGroupSize = 4;
inline constexpr long kDefaultMargin = 16;

/// Partitions correspondences into consecutive windows of
/// `pings_per_group` pings on line a; groups smaller than `min_size` are
/// discarded. Groups come out ordered by id, members in input order.
std::vector<CorrespondenceGroup> group_keypoints(const std::vector<KeypointCorrespondence>& correspondences,
                                                 std::size_t pings_per_group,
                                                 std::size_t min_size = kMinGroupSize);

/// Sends both sides of every member through map_keypoint; members dropped on
/// either side are removed.
CorrespondenceGroup map_group(const CorrespondenceGroup& group, const TransformMeta& meta_a,
                              const TransformMeta& meta_b);

/// Image rectangle: top-left corner plus size.
struct Window {
  long row = 0;
  long col = 0;
  long height = 0;
  long width = 0;
  bool operator==(const Window&) const = default;
};

/// "raw" or "canonical:<law>".
std::string provenance_label(std::optional<LambertianLaw> law);

struct PatchPair {
  std::size_t group_id = 0;
  Matrix<double> patch_a;
  Matrix<double> patch_b;
  /// Patch-local (row, col) coordinates; the i-th of a corresponds to the
  /// i-th of b.
  std::vector<PixelCoord> keypoints_a;
  std::vector<PixelCoord> keypoints_b;
  Window window_a;
  Window window_b;
  bool clipped_a = false;
  bool clipped_b = false;
  std::string provenance = "raw";
};

/// Bounding box of the keypoints grown by `margin` (at least 3x3 around
/// the box centre), clipped to the image. Sets `clipped` when clipping was
/// needed.
Window keypoint_window(const std::vector<PixelCoord>& keypoints, long margin, std::size_t image_rows,
                       std::size_t image_cols, bool& clipped);

/// Cuts one window per image around that image's keypoints.
PatchPair extract_patch_pair(const Matrix<double>& image_a, const Matrix<double>& image_b,
                             const CorrespondenceGroup& group, long margin,
                             const std::string& provenance = "raw");

/// Correspondences between two images: keeps those whose line ids and side
/// match (records listed the other way round are swapped).
std::vector<KeypointCorrespondence> select_correspondences(const std::vector<KeypointCorrespondence>& all,
                                                           const std::string& line_a, const std::string& line_b,
                                                           Side side);

/// Groups raw correspondences, optionally sends them onto canonical grids
/// (pass both metas or neither) and cuts one pair per group. Groups left
/// empty by mapping are skipped with a warning.
std::vector<PatchPair> build_patch_pairs(const Matrix<double>& image_a, const Matrix<double>& image_b,
                                         const std::vector<KeypointCorrespondence>& correspondences,
                                         const TransformMeta* meta_a, const TransformMeta* meta_b,
                                         std::size_t pings_per_group, long margin,
                                         const std::string& provenance);

/// Copy of a sub-rectangle.
Matrix<double> crop(const Matrix<double>& image, const Window& window);

}  // namespace sss
