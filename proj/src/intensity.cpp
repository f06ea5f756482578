// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sss/simd/kernels.hpp"

namespace sss {

namespace {

// Below this the x / sin(x) ratio is 1 to double precision.
constexpr double kSincTiny = 1e-8;

double lobe_ratio_pow(double x, int exponent) {
  const double ratio = std::abs(x) < kSincTiny ? 1.0 : x / std::sin(x);
  return std::pow(ratio, exponent);
}

void require_stage(const IntensityPing& ping, IntensityStage expected, const char* op) {
  if (ping.stage != expected) {
    std::ostringstream msg;
    msg << op << " expects a " << to_string(expected) << " ping, got " << to_string(ping.stage);
    throw StageError(msg.str());
  }
}

void require_aligned(const IntensityPing& ping, const PingGeometry& geom) {
  if (ping.values.size() != geom.size()) {
    throw ShapeError("ping has " + std::to_string(ping.values.size()) +
                     " values but its geometry retains " + std::to_string(geom.size()) + " bins");
  }
}

}  // namespace

std::string_view to_string(IntensityStage stage) {
  switch (stage) {
    case IntensityStage::Raw: return "raw";
    case IntensityStage::BeamCorrected: return "beam-corrected";
    case IntensityStage::IncidenceCorrected: return "incidence-corrected";
  }
  return "?";
}

double beam_pattern_gain(double phi_rad, const SensorConfig& config) {
  const double x = config.k_phi * std::sin(phi_rad - deg2rad(config.phi0_deg));
  if (std::abs(x) >= std::numbers::pi) {
    throw DomainError("beam null: |k_phi sin(phi - phi0)| >= pi");
  }
  return lobe_ratio_pow(x, config.beam_exponent);
}

double effective_beam_gain(double phi_rad, const SensorConfig& config) {
  if (config.beam_model == BeamModel::Flat) return 1.0;
  double x = config.k_phi * std::sin(phi_rad - deg2rad(config.phi0_deg));
  const double limit = kBeamNullClamp * std::numbers::pi;
  x = std::clamp(x, -limit, limit);
  const double gain = lobe_ratio_pow(x, config.beam_exponent);
  return config.beam_model == BeamModel::Reciprocal ? 1.0 / gain : gain;
}

double lambertian_factor(double theta_rad, LambertianLaw law) {
  if (!(theta_rad >= 0.0 && theta_rad < std::numbers::pi / 2)) {
    throw DomainError("incidence angle must be in [0, 90) degrees");
  }
  switch (law) {
    case LambertianLaw::Cos: return std::cos(theta_rad);
    case LambertianLaw::CosSquared: {
      const double c = std::cos(theta_rad);
      return c * c;
    }
    case LambertianLaw::Cot:
      if (theta_rad == 0.0) throw DomainError("cot law is infinite at normal incidence");
      return 1.0 / std::tan(theta_rad);
  }
  throw DomainError("unknown Lambertian law");
}

IntensityPing correct_beam_pattern(IntensityPing ping, const PingGeometry& geom,
                                   const SensorConfig& config) {
  require_stage(ping, IntensityStage::Raw, "correct_beam_pattern");
  require_aligned(ping, geom);
  std::vector<double> inv(geom.size());
  for (std::size_t j = 0; j < inv.size(); ++j) {
    inv[j] = 1.0 / effective_beam_gain(geom.depression_angles_rad[j], config);
  }
  simd::active().multiply(ping.values.data(), inv.data(), inv.size());
  ping.stage = IntensityStage::BeamCorrected;
  return ping;
}

IntensityPing correct_incidence(IntensityPing ping, const PingGeometry& geom, LambertianLaw law) {
  require_stage(ping, IntensityStage::BeamCorrected, "correct_incidence");
  require_aligned(ping, geom);
  std::vector<double> inv(geom.size());
  for (std::size_t j = 0; j < inv.size(); ++j) {
    inv[j] = 1.0 / lambertian_factor(geom.incidence_angles_rad[j], law);
  }
  simd::active().multiply(ping.values.data(), inv.data(), inv.size());
  ping.stage = IntensityStage::IncidenceCorrected;
  return ping;
}

double percentile(std::vector<double> sample, double pct) {
  if (sample.empty()) throw DomainError("percentile of an empty sample");
  if (!(pct >= 0.0 && pct <= 100.0)) throw DomainError("percentile must be in [0, 100]");
  const double pos = pct / 100.0 * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(lo), sample.end());
  const double a = sample[lo];
  if (frac == 0.0 || lo + 1 >= sample.size()) return a;
  const double b = *std::min_element(sample.begin() + static_cast<std::ptrdiff_t>(lo) + 1, sample.end());
  return a + frac * (b - a);
}

void normalize_dynamic_range(std::span<double> values, std::span<const std::uint8_t> valid,
                             double clip_percentile) {
  if (!valid.empty() && valid.size() != values.size()) {
    throw ShapeError("validity mask does not match value count");
  }
  std::vector<double> sample;
  sample.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if ((valid.empty() || valid[i] != 0) && std::isfinite(values[i])) sample.push_back(values[i]);
  }
  if (sample.empty()) throw DomainError("normalize_dynamic_range needs at least one finite value");

  const double lo = *std::min_element(sample.begin(), sample.end());
  const double clip = percentile(std::move(sample), clip_percentile);
  const double span = clip - lo;
  const double scale_ref = std::max(std::abs(clip), std::abs(lo));
  const bool degenerate = !(span > kDegenerateRangeRel * scale_ref) || !(span > 0.0);

  if (degenerate) {
    std::fill(values.begin(), values.end(), 0.0);
    return;
  }
  simd::active().affine_clamp(values.data(), values.size(), lo, 1.0 / span);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if ((!valid.empty() && valid[i] == 0) || !std::isfinite(values[i])) values[i] = 0.0;
  }
}

}  // namespace sss
