// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/geometry.hpp"

#include <cmath>
#include <sstream>

namespace sss {

namespace {

void check_altitude(double altitude_m) {
  if (!(altitude_m > 0.0) || !std::isfinite(altitude_m)) {
    throw DomainError("altitude must be positive and finite");
  }
}

void check_above_floor(double slant_m, double altitude_m) {
  check_altitude(altitude_m);
  if (!(slant_m >= altitude_m)) {
    std::ostringstream msg;
    msg << "slant range " << slant_m << " m is shorter than altitude " << altitude_m
        << " m: bin above seafloor, belongs to nadir/water column";
    throw DomainError(msg.str());
  }
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::Port ? "port" : "starboard"; }

Side side_from_string(std::string_view name) {
  if (name == "port") return Side::Port;
  if (name == "starboard") return Side::Starboard;
  throw FormatError("unknown side '" + std::string(name) + "'");
}

std::string_view to_string(LambertianLaw law) {
  switch (law) {
    case LambertianLaw::Cos: return "cos";
    case LambertianLaw::CosSquared: return "cos2";
    case LambertianLaw::Cot: return "cot";
  }
  return "?";
}

LambertianLaw law_from_string(std::string_view name) {
  if (name == "cos") return LambertianLaw::Cos;
  if (name == "cos2") return LambertianLaw::CosSquared;
  if (name == "cot") return LambertianLaw::Cot;
  throw FormatError("unknown Lambertian law '" + std::string(name) + "' (expected cos, cos2 or cot)");
}

std::string_view to_string(BeamModel model) {
  switch (model) {
    case BeamModel::AsPrinted: return "as-printed";
    case BeamModel::Reciprocal: return "reciprocal";
    case BeamModel::Flat: return "flat";
  }
  return "?";
}

BeamModel beam_model_from_string(std::string_view name) {
  if (name == "as-printed") return BeamModel::AsPrinted;
  if (name == "reciprocal") return BeamModel::Reciprocal;
  if (name == "flat") return BeamModel::Flat;
  throw FormatError("unknown beam model '" + std::string(name) + "'");
}

void SensorConfig::validate() const {
  if (!(slant_resolution_m > 0.0)) throw DomainError("slant_resolution_m must be > 0");
  if (num_bins == 0) throw DomainError("num_bins must be > 0");
  if (!(theta0_deg > 0.0 && theta0_deg < 90.0)) throw DomainError("theta0_deg must be in (0, 90)");
  if (!(phi0_deg > 0.0 && phi0_deg < 90.0)) throw DomainError("phi0_deg must be in (0, 90)");
  if (!(k_phi > 0.0)) throw DomainError("k_phi must be > 0");
  if (beam_exponent < 1) throw DomainError("beam_exponent must be >= 1");
  if (!(lambertian_k > 0.0)) throw DomainError("lambertian_k must be > 0");
}

double slant_to_ground(double slant_m, double altitude_m) {
  check_above_floor(slant_m, altitude_m);
  // (r - h)(r + h) loses less precision than r^2 - h^2 close to nadir.
  return std::sqrt((slant_m - altitude_m) * (slant_m + altitude_m));
}

double incidence_angle(double slant_m, double altitude_m) {
  check_above_floor(slant_m, altitude_m);
  return std::acos(altitude_m / slant_m);
}

double depression_angle(double slant_m, double altitude_m) {
  check_above_floor(slant_m, altitude_m);
  return std::asin(altitude_m / slant_m);
}

std::pair<double, double> ground_range_window(double altitude_m, double max_slant_m,
                                              double theta0_rad) {
  check_altitude(altitude_m);
  if (!(theta0_rad >= 0.0 && theta0_rad < std::numbers::pi / 2)) {
    throw DomainError("theta0 must be in [0, 90) degrees");
  }
  const double cut_slant = altitude_m / std::cos(theta0_rad);
  if (!(max_slant_m > cut_slant)) {
    std::ostringstream msg;
    msg << "max slant range " << max_slant_m << " m does not reach the nadir cutoff at "
        << cut_slant << " m: entire ping inside nadir cutoff";
    throw DomainError(msg.str());
  }
  return {altitude_m * std::tan(theta0_rad), slant_to_ground(max_slant_m, altitude_m)};
}

PingGeometry build_ping_geometry(double altitude_m, const SensorConfig& config) {
  check_altitude(altitude_m);
  config.validate();

  const double cut_slant = altitude_m / std::cos(deg2rad(config.theta0_deg));
  // First bin whose centre is at or beyond the cutoff slant range.
  std::size_t first = 0;
  while (first < config.num_bins &&
         config.bin_center(first) < cut_slant * (1.0 - kNadirCutSlack)) {
    ++first;
  }
  if (first == config.num_bins) {
    std::ostringstream msg;
    msg << "no bin survives the nadir cut at altitude " << altitude_m << " m (max slant range "
        << config.max_slant_range() << " m)";
    throw DomainError(msg.str());
  }

  PingGeometry geom;
  geom.altitude_m = altitude_m;
  geom.first_bin = first;
  const std::size_t n = config.num_bins - first;
  geom.slant_ranges_m.reserve(n);
  geom.ground_ranges_m.reserve(n);
  geom.incidence_angles_rad.reserve(n);
  geom.depression_angles_rad.reserve(n);
  for (std::size_t j = first; j < config.num_bins; ++j) {
    const double rs = config.bin_center(j);
    geom.slant_ranges_m.push_back(rs);
    geom.ground_ranges_m.push_back(slant_to_ground(rs, altitude_m));
    geom.incidence_angles_rad.push_back(incidence_angle(rs, altitude_m));
    geom.depression_angles_rad.push_back(depression_angle(rs, altitude_m));
  }
  return geom;
}

}  // namespace sss
