// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sss/core.hpp"
#include "sss/geometry.hpp"

namespace sss {

enum class IntensityStage { Raw, BeamCorrected, IncidenceCorrected };

std::string_view to_string(IntensityStage stage);

/// Intensities of the retained bins of one ping, index-aligned with a
/// PingGeometry.
struct IntensityPing {
  std::vector<double> values;
  IntensityStage stage = IntensityStage::Raw;

  /// Slices the retained bins [geom.first_bin, first_bin + geom.size()) out
  /// of a full raw ping row.
  template <class T>
  static IntensityPing from_raw_row(std::span<const T> row, const PingGeometry& geom) {
    if (geom.first_bin + geom.size() > row.size()) {
      throw ShapeError("raw ping shorter than its geometry");
    }
    IntensityPing ping;
    ping.values.assign(row.begin() + static_cast<std::ptrdiff_t>(geom.first_bin),
                       row.begin() + static_cast<std::ptrdiff_t>(geom.first_bin + geom.size()));
    return ping;
  }
};

/// Beam-pattern expression (k sin(phi - phi0) / sin(k sin(phi - phi0)))^p
/// with p = config.beam_exponent. Equals 1 at boresight and grows towards
/// the first null. Throws DomainError once |k sin(phi - phi0)| >= pi.
double beam_pattern_gain(double phi_rad, const SensorConfig& config);

/// Lobe fraction at which per-bin evaluation clamps instead of failing.
inline constexpr double kBeamNullClamp = 0.999;

/// Per-bin gain used by the corrector and the simulator: applies
/// config.beam_model on top of beam_pattern_gain and clamps arguments
/// beyond the null to kBeamNullClamp * pi.
double effective_beam_gain(double phi_rad, const SensorConfig& config);

/// Divisor modelling the backscatter response at incidence theta:
/// cos, cos^2 or cot. Throws for theta outside [0, 90 deg) and for the cot
/// law at theta == 0.
double lambertian_factor(double theta_rad, LambertianLaw law);

/// values[j] /= Phi(phi_j). Requires stage Raw.
IntensityPing correct_beam_pattern(IntensityPing ping, const PingGeometry& geom,
                                   const SensorConfig& config);

/// values[j] /= factor(theta_j, law). Requires stage BeamCorrected.
IntensityPing correct_incidence(IntensityPing ping, const PingGeometry& geom, LambertianLaw law);

inline constexpr double kDefaultClipPercentile = 99.9;

/// Ranges narrower than this (relative to the clip value) count as
/// constant. Float32 storage alone perturbs constant data by ~1e-7.
inline constexpr double kDegenerateRangeRel = 1e-5;

/// Clips at the given upper percentile and maps [min, clip] onto [0, 1]
/// in place. When `valid` is non-empty only flagged entries are used for
/// the statistics and unflagged ones are set to 0. Constant input maps to
/// all zeros.
void normalize_dynamic_range(std::span<double> values, std::span<const std::uint8_t> valid = {},
                             double clip_percentile = kDefaultClipPercentile);

/// Linear-interpolated percentile (0..100) of a non-empty sample.
double percentile(std::vector<double> sample, double pct);

}  // namespace sss
