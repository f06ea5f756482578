// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "sss/parallel.hpp"

namespace sss {

void Waterfall::validate() const {
  config.validate();
  if (intensities.cols() != config.num_bins) {
    throw ShapeError("waterfall has " + std::to_string(intensities.cols()) +
                     " columns but the sensor has " + std::to_string(config.num_bins) + " bins");
  }
  if (altitudes_m.size() != intensities.rows()) {
    throw ShapeError("waterfall has " + std::to_string(intensities.rows()) + " pings but " +
                     std::to_string(altitudes_m.size()) + " altitudes");
  }
  for (std::size_t p = 0; p < altitudes_m.size(); ++p) {
    if (!(altitudes_m[p] > 0.0) || !std::isfinite(altitudes_m[p])) {
      throw DomainError("ping " + std::to_string(p) + " has non-positive altitude");
    }
  }
  for (float v : intensities.flat()) {
    if (!(v >= 0.0f) || !std::isfinite(v)) {
      throw DomainError("waterfall intensities must be finite and non-negative");
    }
  }
}

std::pair<Waterfall, Waterfall> split_sides(const Matrix<float>& full,
                                            const std::vector<double>& altitudes_m,
                                            const SensorConfig& config, const std::string& line_id,
                                            SideLayout layout) {
  Waterfall port{.intensities = {}, .altitudes_m = {}, .side = Side::Port, .config = config, .line_id = line_id};
  Waterfall stbd{.intensities = {}, .altitudes_m = {}, .side = Side::Starboard, .config = config, .line_id = line_id};
  if (full.rows() != altitudes_m.size()) throw ShapeError("one altitude per ping required");

  if (layout == SideLayout::StarboardOnly || layout == SideLayout::PortOnly) {
    Waterfall& target = layout == SideLayout::PortOnly ? port : stbd;
    target.intensities = full;
    target.altitudes_m = altitudes_m;
    target.config.num_bins = full.cols();
    return {port, stbd};
  }

  if (full.cols() % 2 != 0) {
    throw FormatError("two-sided waterfall has an odd column count (" +
                      std::to_string(full.cols()) + ")");
  }
  const std::size_t bins = full.cols() / 2;
  port.config.num_bins = stbd.config.num_bins = bins;
  port.intensities = Matrix<float>(full.rows(), bins);
  stbd.intensities = Matrix<float>(full.rows(), bins);
  for (std::size_t p = 0; p < full.rows(); ++p) {
    for (std::size_t j = 0; j < bins; ++j) {
      port.intensities(p, j) = full(p, bins - 1 - j);
      stbd.intensities(p, j) = full(p, bins + j);
    }
  }
  port.altitudes_m = stbd.altitudes_m = altitudes_m;
  return {port, stbd};
}

Matrix<float> join_sides(const Waterfall& port, const Waterfall& starboard) {
  if (port.intensities.rows() != starboard.intensities.rows() ||
      port.intensities.cols() != starboard.intensities.cols()) {
    throw ShapeError("port and starboard waterfalls differ in shape");
  }
  const std::size_t bins = port.intensities.cols();
  Matrix<float> full(port.intensities.rows(), 2 * bins);
  for (std::size_t p = 0; p < full.rows(); ++p) {
    for (std::size_t j = 0; j < bins; ++j) {
      full(p, bins - 1 - j) = port.intensities(p, j);
      full(p, bins + j) = starboard.intensities(p, j);
    }
  }
  return full;
}

double default_ground_resolution(const Waterfall& wf) {
  if (wf.num_pings() == 0) throw DomainError("empty waterfall");
  const PingGeometry geom = build_ping_geometry(wf.altitudes_m.front(), wf.config);
  const auto& rg = geom.ground_ranges_m;
  if (rg.size() < 2) throw DomainError("need at least two retained bins for a default resolution");
  const std::size_t mid = std::min(rg.size() / 2, rg.size() - 2);
  return rg[mid + 1] - rg[mid];
}

namespace {

// Geometry per distinct altitude; pings at equal altitude share it.
struct GeometryCache {
  std::vector<PingGeometry> geometries;
  std::vector<std::size_t> index_of_ping;
};

GeometryCache build_geometries(const Waterfall& wf) {
  GeometryCache cache;
  std::map<double, std::size_t> seen;
  std::vector<double> unique;
  cache.index_of_ping.resize(wf.num_pings());
  for (std::size_t p = 0; p < wf.num_pings(); ++p) {
    auto [it, inserted] = seen.try_emplace(wf.altitudes_m[p], unique.size());
    if (inserted) unique.push_back(wf.altitudes_m[p]);
    cache.index_of_ping[p] = it->second;
  }
  cache.geometries.resize(unique.size());
  parallel_for(unique.size(), [&](std::size_t k) {
    try {
      cache.geometries[k] = build_ping_geometry(unique[k], wf.config);
    } catch (const DomainError& e) {
      std::ostringstream msg;
      msg << "altitude " << unique[k] << " m: " << e.what();
      throw DomainError(msg.str());
    }
  });
  return cache;
}

GroundGrid common_grid(const Waterfall& wf, const GeometryCache& cache, double delta_g_m) {
  if (!(delta_g_m > 0.0)) throw DomainError("ground resolution must be > 0");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::size_t lo_ping = 0;
  std::size_t hi_ping = 0;
  for (std::size_t p = 0; p < wf.num_pings(); ++p) {
    const PingGeometry& g = cache.geometries[cache.index_of_ping[p]];
    if (g.ground_ranges_m.front() > lo) {
      lo = g.ground_ranges_m.front();
      lo_ping = p;
    }
    if (g.ground_ranges_m.back() < hi) {
      hi = g.ground_ranges_m.back();
      hi_ping = p;
    }
  }
  double k = std::ceil(lo / delta_g_m);
  double start = k * delta_g_m;
  if (start < lo) start = (k + 1.0) * delta_g_m;
  const double span = hi - start;
  const double count = span > 0.0 ? std::floor(span / delta_g_m * (1.0 + 1e-12)) : 0.0;
  if (count < 1.0) {
    std::ostringstream msg;
    msg << "empty common ground grid: ping " << lo_ping << " (altitude " << wf.altitudes_m[lo_ping]
        << " m) starts at ground range " << lo << " m while ping " << hi_ping << " (altitude "
        << wf.altitudes_m[hi_ping] << " m) ends at " << hi << " m";
    throw DomainError(msg.str());
  }
  return GroundGrid{delta_g_m, start, static_cast<std::size_t>(count)};
}

}  // namespace

GroundGrid common_grid(const Waterfall& wf, double delta_g_m) {
  wf.validate();
  if (wf.num_pings() == 0) throw DomainError("empty waterfall");
  return common_grid(wf, build_geometries(wf), delta_g_m);
}

namespace {

CorrectedStack correct_with(const Waterfall& wf, const GeometryCache& cache, LambertianLaw law,
                            const GroundGrid& grid) {
  std::vector<WeightKernel> kernels(cache.geometries.size());
  parallel_for(kernels.size(), [&](std::size_t k) {
    kernels[k] = build_weight_kernel(cache.geometries[k], grid);
  });

  CorrectedStack out{Matrix<double>(wf.num_pings(), grid.num_bins),
                     Matrix<std::uint8_t>(wf.num_pings(), grid.num_bins), grid};
  parallel_for(wf.num_pings(), [&](std::size_t p) {
    const std::size_t k = cache.index_of_ping[p];
    const PingGeometry& geom = cache.geometries[k];
    IntensityPing ping = IntensityPing::from_raw_row(wf.intensities.row(p), geom);
    ping = correct_beam_pattern(std::move(ping), geom, wf.config);
    ping = correct_incidence(std::move(ping), geom, law);
    const CanonicalPing row = resample_ping(ping, kernels[k]);
    std::copy(row.values.begin(), row.values.end(), out.values.row(p).begin());
    std::copy(row.valid.begin(), row.valid.end(), out.validity.row(p).begin());
  });
  return out;
}

}  // namespace

CorrectedStack correct_waterfall(const Waterfall& wf, LambertianLaw law, const GroundGrid& grid) {
  wf.validate();
  grid.validate();
  return correct_with(wf, build_geometries(wf), law, grid);
}

std::pair<CanonicalImage, TransformMeta> canonify(const Waterfall& wf, LambertianLaw law,
                                                  double delta_g_m) {
  wf.validate();
  if (wf.num_pings() == 0) throw DomainError("empty waterfall");
  const GeometryCache cache = build_geometries(wf);
  const double delta = delta_g_m > 0.0 ? delta_g_m : default_ground_resolution(wf);
  const GroundGrid grid = common_grid(wf, cache, delta);
  CorrectedStack stack = correct_with(wf, cache, law, grid);

  normalize_dynamic_range(stack.values.flat(), stack.validity.flat());

  CanonicalImage image;
  image.values = Matrix<float>(stack.values.rows(), stack.values.cols());
  std::transform(stack.values.flat().begin(), stack.values.flat().end(), image.values.flat().begin(),
                 [](double v) { return static_cast<float>(v); });
  image.validity = std::move(stack.validity);
  image.grid = grid;
  image.law = law;
  image.side = wf.side;
  image.source_line_id = wf.line_id;

  TransformMeta meta{wf.altitudes_m, grid, wf.config.theta0_deg, wf.config.slant_resolution_m,
                     wf.config.num_bins, law};
  return {std::move(image), std::move(meta)};
}

std::optional<PixelCoord> map_keypoint(PixelCoord kp, const TransformMeta& meta) {
  if (kp.ping < 0 || static_cast<std::size_t>(kp.ping) >= meta.altitudes_m.size() || kp.bin < 0 ||
      static_cast<std::size_t>(kp.bin) >= meta.num_bins) {
    std::ostringstream msg;
    msg << "keypoint (" << kp.ping << ", " << kp.bin << ") outside the raw image ("
        << meta.altitudes_m.size() << " x " << meta.num_bins << ")";
    throw ShapeError(msg.str());
  }
  const double h = meta.altitudes_m[static_cast<std::size_t>(kp.ping)];
  const double rs = (static_cast<double>(kp.bin) + 0.5) * meta.slant_resolution_m;
  if (rs < h) return std::nullopt;
  const double cut = h / std::cos(deg2rad(meta.theta0_deg));
  if (rs < cut * (1.0 - kNadirCutSlack)) return std::nullopt;

  const double rg = slant_to_ground(rs, h);
  const double u = (rg - meta.grid.start_m) / meta.grid.resolution_m - 0.5;
  const auto bin = static_cast<long>(std::floor(u + 0.5));
  const auto n = static_cast<long>(meta.grid.num_bins);
  if (bin < -1 || bin > n) return std::nullopt;
  return PixelCoord{kp.ping, std::clamp(bin, 0L, n - 1)};
}

Matrix<double> normalized_raw(const Waterfall& wf) {
  wf.validate();
  Matrix<double> out(wf.num_pings(), wf.config.num_bins);
  Matrix<std::uint8_t> valid(wf.num_pings(), wf.config.num_bins, 0);
  const double cos0 = std::cos(deg2rad(wf.config.theta0_deg));
  for (std::size_t p = 0; p < wf.num_pings(); ++p) {
    const double cut = wf.altitudes_m[p] / cos0 * (1.0 - kNadirCutSlack);
    for (std::size_t j = 0; j < wf.config.num_bins; ++j) {
      out(p, j) = wf.intensities(p, j);
      valid(p, j) = wf.config.bin_center(j) >= cut ? 1 : 0;
    }
  }
  normalize_dynamic_range(out.flat(), valid.flat());
  return out;
}

Matrix<double> to_double(const Matrix<float>& m) {
  Matrix<double> out(m.rows(), m.cols());
  std::copy(m.flat().begin(), m.flat().end(), out.flat().begin());
  return out;
}

}  // namespace sss
