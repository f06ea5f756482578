// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sss/core.hpp"
#include "sss/geometry.hpp"
#include "sss/intensity.hpp"
#include "sss/slantrange.hpp"

namespace sss {

/// One survey line, one side: pings x slant bins, bin index increasing with
/// range.
struct Waterfall {
  Matrix<float> intensities;
  std::vector<double> altitudes_m;
  Side side = Side::Starboard;
  SensorConfig config;
  std::string line_id;

  std::size_t num_pings() const { return intensities.rows(); }
  void validate() const;
  bool operator==(const Waterfall&) const = default;
};

/// How the columns of an unsplit waterfall are laid out.
enum class SideLayout {
  /// 2 * num_bins columns; port occupies the left half mirrored about
  /// nadir (column num_bins - 1 is port bin 0).
  TwoSided,
  StarboardOnly,
  PortOnly,
};

/// Splits a two-sided waterfall into (port, starboard) with the port side
/// un-mirrored. For single-sided layouts the given side passes through and
/// the other one is returned empty (zero pings).
std::pair<Waterfall, Waterfall> split_sides(const Matrix<float>& full,
                                            const std::vector<double>& altitudes_m,
                                            const SensorConfig& config, const std::string& line_id,
                                            SideLayout layout = SideLayout::TwoSided);

/// Inverse of split_sides for the two-sided layout.
Matrix<float> join_sides(const Waterfall& port, const Waterfall& starboard);

/// Everything needed to send raw (ping, slant bin) coordinates onto a
/// canonical image.
struct TransformMeta {
  std::vector<double> altitudes_m;
  GroundGrid grid;
  double theta0_deg = 30.0;
  double slant_resolution_m = 0.0;
  std::size_t num_bins = 0;
  LambertianLaw law = LambertianLaw::CosSquared;

  bool operator==(const TransformMeta&) const = default;
};

/// Pings x ground bins in [0, 1], with a validity mask.
struct CanonicalImage {
  Matrix<float> values;
  Matrix<std::uint8_t> validity;
  GroundGrid grid;
  LambertianLaw law = LambertianLaw::CosSquared;
  Side side = Side::Starboard;
  std::string source_line_id;

  bool operator==(const CanonicalImage&) const = default;
};

/// Corrected intensities on the common grid before normalization.
struct CorrectedStack {
  Matrix<double> values;
  Matrix<std::uint8_t> validity;
  GroundGrid grid;
};

/// Mean spacing between consecutive retained ground bins around mid-swath
/// of the first ping: the default ground resolution.
double default_ground_resolution(const Waterfall& wf);

/// Grid common to all pings: spans [max first retained ground range, min
/// last retained ground range], start snapped up to a multiple of
/// `delta_g_m`. Throws DomainError naming the limiting pings when empty.
GroundGrid common_grid(const Waterfall& wf, double delta_g_m);

/// Beam, incidence and slant-range correction of every ping onto `grid`.
CorrectedStack correct_waterfall(const Waterfall& wf, LambertianLaw law, const GroundGrid& grid);

/// Full canonical transform. `delta_g_m` <= 0 selects the default ground
/// resolution.
std::pair<CanonicalImage, TransformMeta> canonify(const Waterfall& wf, LambertianLaw law,
                                                  double delta_g_m = 0.0);

/// Maps a raw keypoint onto the canonical grid. Returns nullopt ("dropped")
/// for points in the water column, inside the nadir cut or more than one
/// bin outside the grid; points within one bin of either grid end are
/// clamped onto it. Throws ShapeError for coordinates outside the raw image.
std::optional<PixelCoord> map_keypoint(PixelCoord kp, const TransformMeta& meta);

/// Uncorrected waterfall scaled into [0, 1] with the same global
/// normalization as canonify over the bins canonify retains (outside the
/// nadir cut); everything nearer is set to 0. This is the "raw" baseline image.
Matrix<double> normalized_raw(const Waterfall& wf);

/// Canonical values widened to double.
Matrix<double> to_double(const Matrix<float>& m);

}  // namespace sss
