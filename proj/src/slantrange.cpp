// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/slantrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sss/simd/kernels.hpp"

namespace sss {

namespace {

// Coverage test slack, as a fraction of the grid resolution. Grid edges are
// computed as start + i * delta and may overshoot the support by an ulp.
constexpr double kCoverageSlack = 1e-9;

void check_increasing(std::span<const double> r) {
  for (std::size_t j = 1; j < r.size(); ++j) {
    if (!(r[j] > r[j - 1])) throw DomainError("ground ranges must be strictly increasing");
  }
}

}  // namespace

void GroundGrid::validate() const {
  if (!(resolution_m > 0.0) || !std::isfinite(resolution_m)) {
    throw DomainError("ground grid resolution must be > 0");
  }
  if (num_bins == 0) throw DomainError("ground grid needs at least one bin");
  if (!std::isfinite(start_m)) throw DomainError("ground grid start must be finite");
}

std::vector<double> source_bin_edges(std::span<const double> r) {
  if (r.empty()) return {};
  check_increasing(r);
  std::vector<double> edges(r.size() + 1);
  edges.front() = r.front();
  for (std::size_t j = 1; j < r.size(); ++j) edges[j] = 0.5 * (r[j - 1] + r[j]);
  edges.back() = r.back();
  return edges;
}

WeightKernel build_weight_kernel(std::span<const double> ground_ranges_m, const GroundGrid& grid) {
  grid.validate();
  if (ground_ranges_m.empty()) throw DomainError("no source bins to resample");
  check_increasing(ground_ranges_m);

  const std::vector<double> edges = source_bin_edges(ground_ranges_m);
  const std::size_t n = ground_ranges_m.size();
  const double support_lo = edges.front();
  const double support_hi = edges.back();
  if (!(grid.end_m() > support_lo && grid.start_m < support_hi)) {
    std::ostringstream msg;
    msg << "ground grid [" << grid.start_m << ", " << grid.end_m()
        << "] does not overlap the source support [" << support_lo << ", " << support_hi << "]";
    throw DomainError(msg.str());
  }

  WeightKernel kernel;
  kernel.num_sources = n;
  kernel.source_begin.assign(grid.num_bins, 0);
  kernel.offset.assign(grid.num_bins, 0);
  kernel.length.assign(grid.num_bins, 0);

  const double slack = kCoverageSlack * grid.resolution_m;
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.num_bins; ++i) {
    const double a = grid.lower_edge(i);
    const double b = grid.lower_edge(i + 1);
    kernel.offset[i] = kernel.weights.size();
    if (a < support_lo - slack || b > support_hi + slack) continue;

    while (j + 1 < n && edges[j + 1] <= a) ++j;
    const std::size_t first = j;
    double total = 0.0;
    for (std::size_t k = first; k < n && edges[k] < b; ++k) {
      // First/last contributors get their partial overlap, interior ones
      // their whole midpoint-to-midpoint width.
      const double overlap = std::min(b, edges[k + 1]) - std::max(a, edges[k]);
      if (overlap <= 0.0) {
        if (kernel.weights.size() == kernel.offset[i]) {
          kernel.source_begin[i] = k + 1;
          continue;
        }
        break;
      }
      if (kernel.weights.size() == kernel.offset[i]) kernel.source_begin[i] = k;
      kernel.weights.push_back(overlap);
      total += overlap;
    }
    const std::size_t len = kernel.weights.size() - kernel.offset[i];
    if (len == 0 || !(total > 0.0)) {
      kernel.weights.resize(kernel.offset[i]);
      continue;
    }
    for (std::size_t k = 0; k < len; ++k) kernel.weights[kernel.offset[i] + k] /= total;
    kernel.length[i] = len;
  }
  return kernel;
}

WeightKernel build_weight_kernel(const PingGeometry& geom, const GroundGrid& grid) {
  return build_weight_kernel(geom.ground_ranges_m, grid);
}

CanonicalPing resample_values(std::span<const double> values, const WeightKernel& kernel) {
  if (values.size() != kernel.num_sources) {
    throw ShapeError("ping length " + std::to_string(values.size()) +
                     " does not match kernel source extent " + std::to_string(kernel.num_sources));
  }
  CanonicalPing out;
  out.values.assign(kernel.rows(), 0.0);
  out.valid.assign(kernel.rows(), 0);
  simd::active().sparse_rows(kernel.source_begin.data(), kernel.offset.data(),
                             kernel.length.data(), kernel.weights.data(), kernel.rows(),
                             values.data(), out.values.data());
  for (std::size_t i = 0; i < kernel.rows(); ++i) out.valid[i] = kernel.length[i] != 0;
  return out;
}

CanonicalPing resample_ping(const IntensityPing& ping, const WeightKernel& kernel) {
  if (ping.stage != IntensityStage::IncidenceCorrected) {
    throw StageError("resample_ping expects an incidence-corrected ping, got " +
                     std::string(to_string(ping.stage)));
  }
  return resample_values(ping.values, kernel);
}

CanonicalPing oracle_resample(std::span<const double> values, std::span<const double> ground_ranges_m,
                              const GroundGrid& grid, std::size_t supersample) {
  grid.validate();
  if (supersample == 0) throw DomainError("supersample must be positive");
  if (values.size() != ground_ranges_m.size()) throw ShapeError("values and ranges differ in length");
  check_increasing(ground_ranges_m);

  const std::vector<double> edges = source_bin_edges(ground_ranges_m);
  std::vector<double> sum(grid.num_bins, 0.0);
  std::vector<double> mass(grid.num_bins, 0.0);
  const double inv_res = 1.0 / grid.resolution_m;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double width = edges[j + 1] - edges[j];
    if (!(width > 0.0)) continue;
    const double step = width / static_cast<double>(supersample);
    for (std::size_t k = 0; k < supersample; ++k) {
      const double pos = edges[j] + (static_cast<double>(k) + 0.5) * step;
      const double u = std::floor((pos - grid.start_m) * inv_res);
      if (u < 0.0 || u >= static_cast<double>(grid.num_bins)) continue;
      const auto bin = static_cast<std::size_t>(u);
      sum[bin] += values[j] * step;
      mass[bin] += step;
    }
  }
  CanonicalPing out;
  out.values.assign(grid.num_bins, 0.0);
  out.valid.assign(grid.num_bins, 0);
  for (std::size_t i = 0; i < grid.num_bins; ++i) {
    if (mass[i] > 0.0) {
      out.values[i] = sum[i] / mass[i];
      out.valid[i] = 1;
    }
  }
  return out;
}

CanonicalPing oracle_resample(const IntensityPing& ping, const PingGeometry& geom,
                              const GroundGrid& grid, std::size_t supersample) {
  return oracle_resample(ping.values, geom.ground_ranges_m, grid, supersample);
}

CanonicalPing slant_range_correct(const IntensityPing& ping, double altitude_m,
                                  const SensorConfig& config, const GroundGrid& grid) {
  const PingGeometry geom = build_ping_geometry(altitude_m, config);
  return resample_ping(ping, build_weight_kernel(geom, grid));
}

}  // namespace sss
