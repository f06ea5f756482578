// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sss/intensity.hpp"
#include "sss/log.hpp"
#include "sss/parallel.hpp"

namespace sss {

bool ReflectivityMap::contains(double x, double y) const {
  return !values.empty() && x >= origin_x_m && x <= max_x() && y >= origin_y_m && y <= max_y();
}

double ReflectivityMap::sample(double x, double y) const {
  if (!contains(x, y)) {
    std::ostringstream msg;
    msg << "point (" << x << ", " << y << ") outside the reflectivity map";
    throw DomainError(msg.str());
  }
  const double u = (x - origin_x_m) / cell_size_m;
  const double v = (y - origin_y_m) / cell_size_m;
  const std::size_t i = std::min(static_cast<std::size_t>(u), values.rows() - 2);
  const std::size_t k = std::min(static_cast<std::size_t>(v), values.cols() - 2);
  const double fu = u - static_cast<double>(i);
  const double fv = v - static_cast<double>(k);
  return (1 - fu) * ((1 - fv) * values(i, k) + fv * values(i, k + 1)) +
         fu * ((1 - fv) * values(i + 1, k) + fv * values(i + 1, k + 1));
}

namespace {

std::vector<double> gaussian_taps(double sigma_cells) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_cells)));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    const double w = std::exp(-0.5 * t * t / (sigma_cells * sigma_cells));
    taps[t + radius] = w;
    total += w;
  }
  for (double& w : taps) w /= total;
  return taps;
}

// Separable blur with clamped borders.
void blur(Matrix<double>& m, double sigma_cells) {
  if (sigma_cells <= 0.0) return;
  const auto taps = gaussian_taps(sigma_cells);
  const long radius = static_cast<long>(taps.size() / 2);
  const long rows = static_cast<long>(m.rows());
  const long cols = static_cast<long>(m.cols());
  Matrix<double> tmp(m.rows(), m.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double s = 0.0;
      for (long t = -radius; t <= radius; ++t) {
        s += taps[t + radius] * m(r, std::clamp(c + t, 0L, cols - 1));
      }
      tmp(r, c) = s;
    }
  }
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double s = 0.0;
      for (long t = -radius; t <= radius; ++t) {
        s += taps[t + radius] * tmp(std::clamp(r + t, 0L, rows - 1), c);
      }
      m(r, c) = s;
    }
  }
}

double segment_distance(WorldPoint p, WorldPoint a, WorldPoint b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

void render_ridge(Matrix<double>& layer, const MapExtent& ext, const Ridge& ridge) {
  if (ridge.path.empty() || !(ridge.sigma_m > 0.0)) return;
  const double reach = 4.0 * ridge.sigma_m;
  const double inv2s2 = 0.5 / (ridge.sigma_m * ridge.sigma_m);
  const std::size_t segments = ridge.path.size() > 1 ? ridge.path.size() - 1 : 1;
  for (std::size_t s = 0; s < segments; ++s) {
    const WorldPoint a = ridge.path[s];
    const WorldPoint b = ridge.path.size() > 1 ? ridge.path[s + 1] : a;
    const auto to_index = [&](double v, double origin, std::size_t n) {
      return static_cast<long>(std::clamp((v - origin) / ext.cell_size_m, 0.0, static_cast<double>(n - 1)));
    };
    const long i0 = to_index(std::min(a.x, b.x) - reach, ext.origin_x_m, layer.rows());
    const long i1 = to_index(std::max(a.x, b.x) + reach, ext.origin_x_m, layer.rows()) + 1;
    const long k0 = to_index(std::min(a.y, b.y) - reach, ext.origin_y_m, layer.cols());
    const long k1 = to_index(std::max(a.y, b.y) + reach, ext.origin_y_m, layer.cols()) + 1;
    for (long i = i0; i <= i1 && i < static_cast<long>(layer.rows()); ++i) {
      for (long k = k0; k <= k1 && k < static_cast<long>(layer.cols()); ++k) {
        const WorldPoint p{ext.origin_x_m + static_cast<double>(i) * ext.cell_size_m,
                           ext.origin_y_m + static_cast<double>(k) * ext.cell_size_m};
        const double d = segment_distance(p, a, b);
        if (d > reach) continue;
        double& cell = layer(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
        cell = std::max(cell, ridge.reflectivity * std::exp(-d * d * inv2s2));
      }
    }
  }
}

}  // namespace

ReflectivityMap make_reflectivity_map(std::uint64_t seed, const MapExtent& extent,
                                      const FeatureSpec& features, const NoiseTexture& texture) {
  if (!(extent.length_m > 0.0 && extent.width_m > 0.0 && extent.cell_size_m > 0.0)) {
    throw DomainError("map size and cell size must be positive");
  }
  const auto nx = static_cast<std::size_t>(std::ceil(extent.length_m / extent.cell_size_m)) + 1;
  const auto ny = static_cast<std::size_t>(std::ceil(extent.width_m / extent.cell_size_m)) + 1;

  ReflectivityMap map;
  map.cell_size_m = extent.cell_size_m;
  map.origin_x_m = extent.origin_x_m;
  map.origin_y_m = extent.origin_y_m;
  map.seed = seed;
  map.values = Matrix<double>(nx, ny, texture.background);

  if (texture.amplitude > 0.0) {
    Matrix<double> noise(nx, ny);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : noise.flat()) v = normal(rng);
    blur(noise, texture.correlation_m / extent.cell_size_m);
    double sum = 0.0, sum2 = 0.0;
    for (double v : noise.flat()) {
      sum += v;
      sum2 += v * v;
    }
    const double n = static_cast<double>(noise.size());
    const double mean = sum / n;
    const double sd = std::sqrt(std::max(sum2 / n - mean * mean, 1e-300));
    auto out = map.values.flat();
    auto in = noise.flat();
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = texture.background + texture.amplitude * (in[i] - mean) / sd;
    }
  }

  if (!features.ridges.empty()) {
    Matrix<double> layer(nx, ny, 0.0);
    for (const auto& ridge : features.ridges) render_ridge(layer, extent, ridge);
    auto out = map.values.flat();
    auto in = layer.flat();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], in[i]);
  }
  for (double& v : map.values.flat()) v = std::clamp(v, kMinReflectivity, kMaxReflectivity);
  return map;
}

FeatureSpec curve_pair_feature(WorldPoint centre, double size_m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double heading = 2.0 * std::numbers::pi * unit(rng);
  const double radius = size_m * (0.6 + 0.4 * unit(rng));
  const double sweep = deg2rad(50.0 + 40.0 * unit(rng));
  const double gap = size_m * (0.3 + 0.15 * unit(rng));

  FeatureSpec spec;
  for (int arc = 0; arc < 2; ++arc) {
    // Both arcs share a centre of curvature; the second sits `gap` further out.
    const double r = radius + arc * gap;
    const WorldPoint pivot{centre.x - (radius + 0.5 * gap) * std::cos(heading),
                           centre.y - (radius + 0.5 * gap) * std::sin(heading)};
    Ridge ridge;
    ridge.sigma_m = 0.25 + 0.1 * unit(rng);
    ridge.reflectivity = 0.85 + 0.15 * unit(rng);
    constexpr int kSteps = 24;
    for (int s = 0; s <= kSteps; ++s) {
      const double a = heading - 0.5 * sweep + sweep * s / kSteps;
      ridge.path.push_back({pivot.x + r * std::cos(a), pivot.y + r * std::sin(a)});
    }
    spec.keypoints.push_back(ridge.path.front());
    spec.keypoints.push_back(ridge.path.back());
    spec.ridges.push_back(std::move(ridge));
  }
  return spec;
}

FeatureSpec scatter_curve_pairs(std::uint64_t seed, std::size_t count, double x_begin, double x_end,
                                double y_min, double y_max, double size_m) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> lateral(y_min, y_max);
  FeatureSpec all;
  const double pitch = count ? (x_end - x_begin) / static_cast<double>(count) : 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const WorldPoint centre{x_begin + (static_cast<double>(i) + 0.5) * pitch, lateral(rng)};
    FeatureSpec one = curve_pair_feature(centre, size_m, rng);
    all.ridges.insert(all.ridges.end(), one.ridges.begin(), one.ridges.end());
    all.keypoints.insert(all.keypoints.end(), one.keypoints.begin(), one.keypoints.end());
  }
  return all;
}

std::vector<double> simulate_ping(const ReflectivityMap& map, const SonarPose& pose, Side side,
                                  const SensorConfig& config, LambertianLaw law, double noise_sigma,
                                  std::mt19937_64& rng) {
  config.validate();
  if (!(pose.altitude_m > 0.0)) throw DomainError("altitude must be positive");
  if (noise_sigma < 0.0) throw DomainError("noise_sigma must be >= 0");
  const double sign = side == Side::Starboard ? 1.0 : -1.0;
  const double h = pose.altitude_m;
  const double last = config.bin_center(config.num_bins - 1);
  const double reach = last > h ? slant_to_ground(last, h) : 0.0;
  if (!map.contains(pose.x_m, pose.y_m) || !map.contains(pose.x_m, pose.y_m + sign * reach)) {
    std::ostringstream msg;
    msg << "swath at x=" << pose.x_m << " m from y=" << pose.y_m << " to "
        << pose.y_m + sign * reach << " m leaves the reflectivity map";
    throw DomainError(msg.str());
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(config.num_bins, 0.0);
  for (std::size_t j = 0; j < config.num_bins; ++j) {
    const double rs = config.bin_center(j);
    if (rs <= h) continue;
    const double rg = slant_to_ground(rs, h);
    const double theta = incidence_angle(rs, h);
    const double phi = depression_angle(rs, h);
    const double reflectivity = map.sample(pose.x_m, pose.y_m + sign * rg);
    double v = config.lambertian_k * effective_beam_gain(phi, config) * reflectivity *
               lambertian_factor(theta, law);
    if (noise_sigma > 0.0) v *= 1.0 + noise_sigma * normal(rng);
    out[j] = std::max(v, 0.0);
  }
  return out;
}

std::optional<PixelCoord> project_world_point(const WorldPoint& point, const SurveyLineSpec& line,
                                              Side side, const SensorConfig& config,
                                              const SurveyTrack& track) {
  const double lateral = point.y - line.lateral_offset_m;
  if ((side == Side::Starboard) != (lateral > 0.0)) return std::nullopt;
  const double along = (point.x - track.x0_m) / track.ping_spacing_m;
  const long ping = std::lround(along);
  if (ping < 0 || static_cast<std::size_t>(ping) >= line.ping_count) return std::nullopt;
  const double h = line.altitude_m;
  const double rs = std::hypot(std::abs(lateral), h);
  const auto bin = static_cast<long>(std::floor(rs / config.slant_resolution_m));
  if (bin < 0 || static_cast<std::size_t>(bin) >= config.num_bins) return std::nullopt;
  const double cut = h / std::cos(deg2rad(config.theta0_deg));
  if (config.bin_center(static_cast<std::size_t>(bin)) < cut * (1.0 + 1e-9)) return std::nullopt;
  return PixelCoord{ping, bin};
}

Survey simulate_survey(const ReflectivityMap& map, const std::vector<SurveyLineSpec>& lines,
                       const SensorConfig& config, const SurveyTrack& track,
                       const std::vector<WorldPoint>& keypoints, std::uint64_t seed) {
  config.validate();
  if (!(track.ping_spacing_m > 0.0)) throw DomainError("ping spacing must be positive");
  Survey survey;
  survey.waterfalls.resize(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const SurveyLineSpec& line = lines[li];
    if (!(line.altitude_m > 0.0) || line.ping_count == 0 || line.noise_sigma < 0.0) {
      throw DomainError("invalid survey line " + std::to_string(li));
    }
    for (int s = 0; s < 2; ++s) {
      const Side side = s == 0 ? Side::Port : Side::Starboard;
      Waterfall& wf = survey.waterfalls[li][static_cast<std::size_t>(s)];
      wf.side = side;
      wf.config = config;
      wf.line_id = "line" + std::to_string(li);
      wf.altitudes_m.assign(line.ping_count, line.altitude_m);
      wf.intensities = Matrix<float>(line.ping_count, config.num_bins);
      parallel_for(line.ping_count, [&](std::size_t p) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(li), static_cast<std::uint32_t>(s),
                          static_cast<std::uint32_t>(p)};
        std::mt19937_64 rng(seq);
        const SonarPose pose{track.x0_m + static_cast<double>(p) * track.ping_spacing_m,
                             line.lateral_offset_m, line.altitude_m};
        const auto row = simulate_ping(map, pose, side, config, line.law, line.noise_sigma, rng);
        std::transform(row.begin(), row.end(), wf.intensities.row(p).begin(),
                       [](double v) { return static_cast<float>(v); });
      });
    }
  }

  std::size_t omitted = 0;
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      for (const auto& point : keypoints) {
        bool seen = false;
        for (Side side : {Side::Port, Side::Starboard}) {
          const auto pa = project_world_point(point, lines[a], side, config, track);
          const auto pb = project_world_point(point, lines[b], side, config, track);
          if (pa && pb) {
            survey.correspondences.push_back(
                {"line" + std::to_string(a), "line" + std::to_string(b), side, *pa, *pb});
            seen = true;
          }
        }
        if (!seen) ++omitted;
      }
    }
  }
  if (omitted > 0) {
    warn(std::to_string(omitted) + " keypoint(s) not visible on the same side of both lines; "
         "correspondences omitted");
  }
  return survey;
}

MapExtent survey_extent(const std::vector<SurveyLineSpec>& lines, const SensorConfig& config,
                        const SurveyTrack& track, double cell_size_m, double margin_m) {
  if (lines.empty()) throw DomainError("no survey lines");
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  std::size_t pings = 0;
  for (const auto& line : lines) {
    const double last = config.bin_center(config.num_bins - 1);
    const double reach = last > line.altitude_m ? slant_to_ground(last, line.altitude_m) : 0.0;
    y_lo = std::min(y_lo, line.lateral_offset_m - reach);
    y_hi = std::max(y_hi, line.lateral_offset_m + reach);
    pings = std::max(pings, line.ping_count);
  }
  MapExtent ext;
  ext.cell_size_m = cell_size_m;
  ext.origin_x_m = track.x0_m - margin_m;
  ext.origin_y_m = y_lo - margin_m;
  ext.length_m = static_cast<double>(pings) * track.ping_spacing_m + 2.0 * margin_m;
  ext.width_m = y_hi - y_lo + 2.0 * margin_m;
  return ext;
}

std::pair<double, double> common_visible_band(const SurveyPlan& plan, double margin_m) {
  if (plan.lines.empty()) throw DomainError("survey plan has no lines");
  const double last = plan.config.bin_center(plan.config.num_bins - 1);
  const double tan0 = std::tan(deg2rad(plan.config.theta0_deg));
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& line : plan.lines) {
    if (last <= line.altitude_m) throw DomainError("maximum slant range does not reach the seafloor");
    // Starboard band of this line, relative to the map's y = 0.
    lo = std::max(lo, line.lateral_offset_m + line.altitude_m * tan0);
    hi = std::min(hi, line.lateral_offset_m + slant_to_ground(last, line.altitude_m));
  }
  lo += margin_m;
  hi -= margin_m;
  if (!(hi > lo)) {
    std::ostringstream msg;
    msg << "survey lines share no visible ground band (need " << lo << " < " << hi << " m)";
    throw DomainError(msg.str());
  }
  return {lo, hi};
}

SimulatedSurvey run_survey_plan(const SurveyPlan& plan, std::uint64_t seed) {
  plan.config.validate();
  const double reach = 1.5 * plan.feature_size_m + 1.0;
  const auto [lo, hi] = common_visible_band(plan, reach);
  std::size_t pings = 0;
  for (const auto& line : plan.lines) pings = std::max(pings, line.ping_count);
  const double x0 = plan.track.x0_m;
  const double x1 = x0 + static_cast<double>(pings - 1) * plan.track.ping_spacing_m;

  SimulatedSurvey out;
  out.features = scatter_curve_pairs(seed, plan.features_per_side, x0, x1, lo, hi, plan.feature_size_m);
  // Port side gets its own draw inside the port band.
  double port_lo = -std::numeric_limits<double>::infinity();
  double port_hi = std::numeric_limits<double>::infinity();
  const double last = plan.config.bin_center(plan.config.num_bins - 1);
  const double tan0 = std::tan(deg2rad(plan.config.theta0_deg));
  for (const auto& line : plan.lines) {
    port_hi = std::min(port_hi, line.lateral_offset_m - line.altitude_m * tan0 - reach);
    port_lo = std::max(port_lo, line.lateral_offset_m - slant_to_ground(last, line.altitude_m) + reach);
  }
  if (port_hi > port_lo) {
    const FeatureSpec port = scatter_curve_pairs(seed + 1, plan.features_per_side, x0, x1, port_lo, port_hi,
                                                 plan.feature_size_m);
    out.features.ridges.insert(out.features.ridges.end(), port.ridges.begin(), port.ridges.end());
    out.features.keypoints.insert(out.features.keypoints.end(), port.keypoints.begin(), port.keypoints.end());
  }
  const MapExtent extent = survey_extent(plan.lines, plan.config, plan.track);
  out.map = make_reflectivity_map(seed, extent, out.features, plan.texture);
  out.survey = simulate_survey(out.map, plan.lines, plan.config, plan.track, out.features.keypoints, seed);
  return out;
}

}  // namespace sss
