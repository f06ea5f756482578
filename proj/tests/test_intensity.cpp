// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sss/intensity.hpp"

namespace sss {
namespace {

double phi0() { return deg2rad(30.0); }

TEST(BeamPattern, Boresight) {
  SensorConfig c;
  EXPECT_NEAR(beam_pattern_gain(phi0(), c), 1.0, 1e-15);
  EXPECT_NEAR(beam_pattern_gain(phi0() + 1e-6, c), 1.0, 1e-9);
}

TEST(BeamPattern, ThirtyDegreesOffAxis) {
  SensorConfig c;
  const double x = 2.78 * std::sin(deg2rad(30.0));
  const double expected = std::pow(x / std::sin(x), 4);
  EXPECT_NEAR(beam_pattern_gain(phi0() + deg2rad(30.0), c), expected, 1e-12);
  EXPECT_NEAR(beam_pattern_gain(phi0() + deg2rad(30.0), c), 3.9866, 1e-3);
  EXPECT_NEAR(beam_pattern_gain(phi0() - deg2rad(30.0), c), 3.9866, 1e-3);
}

TEST(BeamPattern, EvenAboutBoresight) {
  SensorConfig c;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, deg2rad(60.0));
  for (int i = 0; i < 500; ++i) {
    const double delta = d(rng);
    const double up = beam_pattern_gain(phi0() + delta, c);
    EXPECT_NEAR(up, beam_pattern_gain(phi0() - delta, c), 1e-12 * up);
  }
}

TEST(BeamPattern, NullThrowsButEffectiveGainClamps) {
  SensorConfig c;
  c.k_phi = 8.0;  // first null at sin(phi - phi0) = pi / 8
  const double phi = phi0() + std::asin(std::numbers::pi / 8.0) + 0.05;
  EXPECT_THROW(beam_pattern_gain(phi, c), DomainError);
  const double x = kBeamNullClamp * std::numbers::pi;
  EXPECT_NEAR(effective_beam_gain(phi, c), std::pow(x / std::sin(x), 4), 1e-6);
}

TEST(BeamPattern, Models) {
  SensorConfig c;
  const double phi = phi0() + deg2rad(20.0);
  const double g = beam_pattern_gain(phi, c);
  c.beam_model = BeamModel::Reciprocal;
  EXPECT_DOUBLE_EQ(effective_beam_gain(phi, c), 1.0 / g);
  c.beam_model = BeamModel::Flat;
  EXPECT_EQ(effective_beam_gain(phi, c), 1.0);
  EXPECT_EQ(beam_model_from_string("reciprocal"), BeamModel::Reciprocal);
  EXPECT_THROW(beam_model_from_string("bogus"), FormatError);
}

TEST(LambertianFactor, Examples) {
  EXPECT_NEAR(lambertian_factor(deg2rad(60.0), LambertianLaw::Cos), 0.5, 1e-15);
  EXPECT_NEAR(lambertian_factor(deg2rad(60.0), LambertianLaw::CosSquared), 0.25, 1e-15);
  EXPECT_NEAR(lambertian_factor(deg2rad(45.0), LambertianLaw::Cot), 1.0, 1e-15);
  EXPECT_THROW(lambertian_factor(0.0, LambertianLaw::Cot), DomainError);
  EXPECT_THROW(lambertian_factor(deg2rad(90.0), LambertianLaw::Cos), DomainError);
  EXPECT_THROW(lambertian_factor(-0.1, LambertianLaw::Cos), DomainError);
}

PingGeometry geometry_at(double h, SensorConfig c = {}) { return build_ping_geometry(h, c); }

IntensityPing raw_ping(std::vector<double> values) {
  IntensityPing p;
  p.values = std::move(values);
  return p;
}

TEST(CorrectBeamPattern, ConstantInputScalesInversely) {
  SensorConfig c;
  const auto g = geometry_at(20.0, c);
  const auto out = correct_beam_pattern(raw_ping(std::vector<double>(g.size(), 3.0)), g, c);
  EXPECT_EQ(out.stage, IntensityStage::BeamCorrected);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(out.values[j], 3.0 / beam_pattern_gain(g.depression_angles_rad[j], c), 1e-12);
  }
}

TEST(CorrectBeamPattern, ZeroAndBoresight) {
  SensorConfig c;
  c.beam_model = BeamModel::Flat;  // every bin behaves as if at boresight
  const auto g = geometry_at(20.0, c);
  std::mt19937_64 rng(1);
  const std::vector<double> v = test::random_values(rng, g.size(), 0, 5);
  EXPECT_EQ(correct_beam_pattern(raw_ping(v), g, c).values, v);
  SensorConfig d;
  const auto zero = correct_beam_pattern(raw_ping(std::vector<double>(g.size(), 0.0)), g, d);
  for (double x : zero.values) EXPECT_EQ(x, 0.0);
}

TEST(CorrectBeamPattern, RejectsWrongStageAndShape) {
  SensorConfig c;
  const auto g = geometry_at(20.0, c);
  IntensityPing p = raw_ping(std::vector<double>(g.size(), 1.0));
  p.stage = IntensityStage::BeamCorrected;
  EXPECT_THROW(correct_beam_pattern(p, g, c), StageError);
  EXPECT_THROW(correct_beam_pattern(raw_ping({1.0, 2.0}), g, c), ShapeError);
}

TEST(CorrectIncidence, RecoversConstantReflectivity) {
  SensorConfig c;
  c.beam_model = BeamModel::Flat;
  const auto g = geometry_at(17.0, c);
  for (LambertianLaw law : {LambertianLaw::Cos, LambertianLaw::CosSquared, LambertianLaw::Cot}) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = 0.4 * lambertian_factor(g.incidence_angles_rad[j], law);
    const auto out = correct_incidence(correct_beam_pattern(raw_ping(v), g, c), g, law);
    EXPECT_EQ(out.stage, IntensityStage::IncidenceCorrected);
    for (double x : out.values) EXPECT_NEAR(x, 0.4, 0.4 * 1e-12);
  }
}

TEST(CorrectIncidence, LinearAndStageChecked) {
  SensorConfig c;
  const auto g = geometry_at(17.0, c);
  std::mt19937_64 rng(9);
  auto v = test::random_values(rng, g.size(), 0.0, 1.0);
  auto v2 = v;
  for (double& x : v2) x *= 2.0;
  const auto a = correct_incidence(correct_beam_pattern(raw_ping(v), g, c), g, LambertianLaw::Cos);
  const auto b = correct_incidence(correct_beam_pattern(raw_ping(v2), g, c), g, LambertianLaw::Cos);
  for (std::size_t j = 0; j < v.size(); ++j) {
    EXPECT_DOUBLE_EQ(b.values[j], 2.0 * a.values[j]);
    EXPECT_GE(a.values[j], 0.0);
  }
  EXPECT_THROW(correct_incidence(raw_ping(v), g, LambertianLaw::Cos), StageError);
}

TEST(CorrectIncidence, CompositionMatchesDirectDivision) {
  SensorConfig c;
  const auto g = geometry_at(23.0, c);
  std::mt19937_64 rng(4);
  const auto v = test::random_values(rng, g.size(), 0.0, 10.0);
  const auto out = correct_incidence(correct_beam_pattern(raw_ping(v), g, c), g, LambertianLaw::CosSquared);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double direct = v[j] / (beam_pattern_gain(g.depression_angles_rad[j], c) *
                                  lambertian_factor(g.incidence_angles_rad[j], LambertianLaw::CosSquared));
    EXPECT_NEAR(out.values[j], direct, 1e-12 * std::abs(direct));
  }
}

TEST(NormalizeDynamicRange, Examples) {
  std::vector<double> v{0, 1, 2, 100};
  normalize_dynamic_range(v, {}, 100.0);
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 0.01);
  EXPECT_DOUBLE_EQ(v[2], 0.02);
  EXPECT_DOUBLE_EQ(v[3], 1.0);

  std::vector<double> unit{0.0, 0.25, 0.5, 1.0};
  const auto before = unit;
  normalize_dynamic_range(unit, {}, 100.0);
  EXPECT_EQ(unit, before);

  std::vector<double> flat(10, 7.0);
  normalize_dynamic_range(flat);
  for (double x : flat) EXPECT_EQ(x, 0.0);
}

TEST(NormalizeDynamicRange, ClipsAndMasks) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  v[999] = 1e6;
  normalize_dynamic_range(v, {}, 99.0);
  for (double x : v) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
  EXPECT_EQ(v[999], 1.0);

  std::vector<double> w{5.0, 1.0, 3.0, -100.0};
  const std::vector<std::uint8_t> valid{1, 1, 1, 0};
  normalize_dynamic_range(w, valid, 100.0);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 0.0);
  EXPECT_DOUBLE_EQ(w[2], 0.5);
  EXPECT_EQ(w[3], 0.0);
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4, 5}, 50.0), 3.0);
  EXPECT_DOUBLE_EQ(percentile({0, 10}, 25.0), 2.5);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3}, 100.0), 4.0);
  EXPECT_THROW(percentile({}, 50.0), DomainError);
}

}  // namespace
}  // namespace sss
