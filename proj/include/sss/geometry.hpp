// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sss/core.hpp"

namespace sss {

/// How the beam-pattern expression is applied.
///  - AsPrinted: Phi(phi) = (x / sin x)^p, >= 1 inside the main lobe.
///  - Reciprocal: 1 / Phi, i.e. a physical (sin x / x)^p directivity.
///  - Flat: Phi == 1, no beam shaping.
enum class BeamModel { AsPrinted, Reciprocal, Flat };

std::string_view to_string(BeamModel model);
BeamModel beam_model_from_string(std::string_view name);

/// Sonar constants shared by every ping of a survey line.
struct SensorConfig {
  double slant_resolution_m = 0.1;
  std::size_t num_bins = 600;
  double k_phi = 2.78;
  double phi0_deg = 30.0;
  int beam_exponent = 4;
  double theta0_deg = 30.0;
  double lambertian_k = 1.0;
  BeamModel beam_model = BeamModel::AsPrinted;

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  double max_slant_range() const { return slant_resolution_m * static_cast<double>(num_bins); }
  /// Slant range of the centre of bin `j`.
  double bin_center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * slant_resolution_m; }

  bool operator==(const SensorConfig&) const = default;
};

/// Flat-floor ground range of a return at slant range `slant_m`.
double slant_to_ground(double slant_m, double altitude_m);

/// Angle from the vertical, arccos(h / r_s).
double incidence_angle(double slant_m, double altitude_m);

/// Angle below the horizontal, arcsin(h / r_s).
double depression_angle(double slant_m, double altitude_m);

/// Ground-range span [h tan(theta0), sqrt(r_max^2 - h^2)] kept after the
/// nadir cut. `theta0_rad` may be 0 (no cut).
std::pair<double, double> ground_range_window(double altitude_m, double max_slant_m,
                                              double theta0_rad);

/// Per-bin geometry of one ping after the nadir cut. Index k of every list
/// refers to raw bin `first_bin + k`.
struct PingGeometry {
  double altitude_m = 0.0;
  std::size_t first_bin = 0;
  std::vector<double> slant_ranges_m;
  std::vector<double> ground_ranges_m;
  std::vector<double> incidence_angles_rad;
  std::vector<double> depression_angles_rad;

  std::size_t size() const { return slant_ranges_m.size(); }
};

/// Relative slack used when deciding whether a bin sits on the nadir-cut
/// boundary, so that a bin exactly at h / cos(theta0) is retained.
inline constexpr double kNadirCutSlack = 1e-12;

/// Builds the retained-bin geometry for altitude `altitude_m`. Bins with
/// incidence below theta0 (including all water-column bins) are dropped.
PingGeometry build_ping_geometry(double altitude_m, const SensorConfig& config);

}  // namespace sss
