// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sss/geometry.hpp"
#include "sss/intensity.hpp"

namespace sss {

/// Uniform ground-range grid. Bin i covers
/// [start_m + i * resolution_m, start_m + (i + 1) * resolution_m].
struct GroundGrid {
  double resolution_m = 0.0;
  double start_m = 0.0;
  std::size_t num_bins = 0;

  void validate() const;
  double lower_edge(std::size_t i) const { return start_m + static_cast<double>(i) * resolution_m; }
  double center(std::size_t i) const { return start_m + (static_cast<double>(i) + 0.5) * resolution_m; }
  double end_m() const { return lower_edge(num_bins); }

  bool operator==(const GroundGrid&) const = default;
};

/// Ground interval represented by each source bin: from the midpoint with
/// its left neighbour to the midpoint with its right neighbour. The first
/// and last bins stop at their own centres, so the union is exactly
/// [r_g.front(), r_g.back()]. Returns n + 1 edges.
std::vector<double> source_bin_edges(std::span<const double> ground_ranges_m);

/// Sparse row-stochastic map from source bins to grid bins in CSR layout.
/// Row i reads sources [source_begin[i], source_begin[i] + length[i]) with
/// weights weights[offset[i] ...]. A row of length 0 is an empty output bin.
struct WeightKernel {
  std::size_t num_sources = 0;
  std::vector<std::size_t> source_begin;
  std::vector<std::size_t> offset;
  std::vector<std::size_t> length;
  std::vector<double> weights;

  std::size_t rows() const { return length.size(); }
  bool row_empty(std::size_t i) const { return length[i] == 0; }
  std::span<const double> row_weights(std::size_t i) const {
    return {weights.data() + offset[i], length[i]};
  }
};

/// Builds the interval-overlap weights between source bins at the given
/// ground ranges (strictly increasing) and the grid. An output bin gets a
/// row only if it lies fully inside the source support; boundary sources
/// get their partial overlap, interior ones their whole interval, and each
/// row is normalized to sum to 1.
WeightKernel build_weight_kernel(std::span<const double> ground_ranges_m, const GroundGrid& grid);
WeightKernel build_weight_kernel(const PingGeometry& geom, const GroundGrid& grid);

/// One ping on the ground grid. valid[i] == 0 marks bins without data.
struct CanonicalPing {
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
};

/// out_i = sum_j w_ij x_j for every non-empty row. Requires stage
/// IncidenceCorrected.
CanonicalPing resample_ping(const IntensityPing& ping, const WeightKernel& kernel);

/// Unchecked resampling of plain values (no stage bookkeeping); used for
/// re-gridding data that is already on a ground grid.
CanonicalPing resample_values(std::span<const double> values, const WeightKernel& kernel);

/// Brute-force reference: spreads every source value uniformly over its
/// ground interval at `supersample` equal-mass sub-positions and box-averages
/// them into grid bins. Bins that receive no sub-sample are invalid.
CanonicalPing oracle_resample(std::span<const double> values, std::span<const double> ground_ranges_m,
                              const GroundGrid& grid, std::size_t supersample);
CanonicalPing oracle_resample(const IntensityPing& ping, const PingGeometry& geom,
                              const GroundGrid& grid, std::size_t supersample);

/// Full per-ping routine: geometry, kernel and resampling.
CanonicalPing slant_range_correct(const IntensityPing& ping, double altitude_m,
                                  const SensorConfig& config, const GroundGrid& grid);

}  // namespace sss
