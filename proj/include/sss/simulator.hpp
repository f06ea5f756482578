// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sss/core.hpp"
#include "sss/geometry.hpp"
#include "sss/patches.hpp"
#include "sss/pipeline.hpp"

namespace sss {

/// World position: x along-track, y cross-track (starboard positive).
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Seafloor reflectivity sampled on a regular grid of nodes; node (i, k)
/// sits at (origin_x + i * cell, origin_y + k * cell).
struct ReflectivityMap {
  Matrix<double> values;  // rows along x, columns along y
  double cell_size_m = 0.25;
  double origin_x_m = 0.0;
  double origin_y_m = 0.0;
  std::uint64_t seed = 0;

  double max_x() const { return origin_x_m + cell_size_m * static_cast<double>(values.rows() - 1); }
  double max_y() const { return origin_y_m + cell_size_m * static_cast<double>(values.cols() - 1); }
  bool contains(double x, double y) const;
  /// Bilinear interpolation; throws DomainError outside the map.
  double sample(double x, double y) const;
};

/// Extent of a map in world coordinates.
struct MapExtent {
  double origin_x_m = 0.0;
  double origin_y_m = 0.0;
  double length_m = 100.0;  // along x
  double width_m = 100.0;   // along y
  double cell_size_m = 0.25;
};

/// Smoothed gaussian noise around a constant background.
struct NoiseTexture {
  double background = 0.2;
  double amplitude = 0.15;
  double correlation_m = 0.3;
};

/// Bright line feature with a gaussian cross-section along a polyline.
struct Ridge {
  std::vector<WorldPoint> path;
  double sigma_m = 0.3;
  double reflectivity = 1.0;
};

struct FeatureSpec {
  std::vector<Ridge> ridges;
  /// World points for which correspondences are generated.
  std::vector<WorldPoint> keypoints;
};

inline constexpr double kMinReflectivity = 0.05;
inline constexpr double kMaxReflectivity = 1.0;

/// Deterministic for a fixed seed. Ridges are combined with the texture by
/// taking the maximum, then values are clamped to [0.05, 1].
ReflectivityMap make_reflectivity_map(std::uint64_t seed, const MapExtent& extent,
                                      const FeatureSpec& features, const NoiseTexture& texture = {});

/// Two nearby arcs with four keypoints on them, centred at `centre` and
/// spanning roughly `size_m`.
FeatureSpec curve_pair_feature(WorldPoint centre, double size_m, std::mt19937_64& rng);

/// `count` curve pairs spread evenly along-track over [x_begin, x_end] with
/// random cross-track positions in [y_min, y_max].
FeatureSpec scatter_curve_pairs(std::uint64_t seed, std::size_t count, double x_begin, double x_end,
                                double y_min, double y_max, double size_m = 3.0);

/// Vehicle position for one ping.
struct SonarPose {
  double x_m = 0.0;
  double y_m = 0.0;
  double altitude_m = 10.0;
};

/// Forward model for one side of one ping, all config.num_bins bins:
/// K * Phi(phi_j) * R(p_j) * factor(theta_j, law) * (1 + noise), clamped at
/// 0. Water-column bins (r_s <= h) are 0. Throws DomainError when the swath
/// leaves the map.
std::vector<double> simulate_ping(const ReflectivityMap& map, const SonarPose& pose, Side side,
                                  const SensorConfig& config, LambertianLaw law, double noise_sigma,
                                  std::mt19937_64& rng);

struct SurveyLineSpec {
  double altitude_m = 20.0;
  double lateral_offset_m = 0.0;
  std::size_t ping_count = 1000;
  double noise_sigma = 0.0;
  LambertianLaw law = LambertianLaw::CosSquared;
};

/// Along-track sampling shared by all lines: ping p is at x0 + p * spacing.
struct SurveyTrack {
  double x0_m = 0.0;
  double ping_spacing_m = 0.2;
};

struct Survey {
  /// waterfalls[line][0] is port, [line][1] starboard.
  std::vector<std::array<Waterfall, 2>> waterfalls;
  std::vector<KeypointCorrespondence> correspondences;
};

/// Raw (ping, bin) of a world point in one line, or nullopt when it lies
/// outside the swath, inside the nadir cut or on the other side.
std::optional<PixelCoord> project_world_point(const WorldPoint& point, const SurveyLineSpec& line,
                                              Side side, const SensorConfig& config,
                                              const SurveyTrack& track);

/// Both sides of every line plus exact correspondences for each pair of
/// lines (a < b) at every keypoint visible on the same side of both. Line
/// ids are "line<index>". Per-ping noise streams derive from `seed`, so
/// results do not depend on the thread count.
Survey simulate_survey(const ReflectivityMap& map, const std::vector<SurveyLineSpec>& lines,
                       const SensorConfig& config, const SurveyTrack& track,
                       const std::vector<WorldPoint>& keypoints, std::uint64_t seed);

/// Map extent covering every line's swath on both sides plus `margin_m`.
MapExtent survey_extent(const std::vector<SurveyLineSpec>& lines, const SensorConfig& config,
                        const SurveyTrack& track, double cell_size_m = 0.25, double margin_m = 2.0);

/// A complete synthetic survey description: lines, sensor and features.
struct SurveyPlan {
  SensorConfig config;
  SurveyTrack track;
  std::vector<SurveyLineSpec> lines;
  /// Curve-pair features per side, spread evenly along-track.
  std::size_t features_per_side = 20;
  double feature_size_m = 3.0;
  NoiseTexture texture;
};

struct SimulatedSurvey {
  ReflectivityMap map;
  FeatureSpec features;
  Survey survey;
};

/// Cross-track band (on the starboard side, as distances from the track)
/// that every line sees outside its nadir cut, shrunk by `margin_m`.
/// Throws DomainError when the lines share no such band.
std::pair<double, double> common_visible_band(const SurveyPlan& plan, double margin_m);

/// Builds the map with features on both sides inside the common band and
/// simulates every line.
SimulatedSurvey run_survey_plan(const SurveyPlan& plan, std::uint64_t seed);

}  // namespace sss
