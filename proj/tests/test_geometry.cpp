// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sss/geometry.hpp"

namespace sss {
namespace {

TEST(SlantToGround, Examples) {
  EXPECT_EQ(slant_to_ground(30.0, 30.0), 0.0);
  EXPECT_NEAR(slant_to_ground(50.0, 30.0), 40.0, 1e-12);
  EXPECT_THROW(slant_to_ground(20.0, 30.0), DomainError);
  EXPECT_THROW(slant_to_ground(20.0, 0.0), DomainError);
}

TEST(Angles, Examples) {
  const double d = rad2deg(1.0);
  EXPECT_EQ(incidence_angle(30.0, 30.0), 0.0);
  EXPECT_NEAR(incidence_angle(60.0, 30.0) * d, 60.0, 1e-12);
  EXPECT_NEAR(incidence_angle(30.0 * std::sqrt(2.0), 30.0) * d, 45.0, 1e-12);
  EXPECT_NEAR(depression_angle(30.0, 30.0) * d, 90.0, 1e-12);
  EXPECT_NEAR(depression_angle(60.0, 30.0) * d, 30.0, 1e-12);
  EXPECT_NEAR(depression_angle(30.0 * std::sqrt(2.0), 30.0) * d, 45.0, 1e-12);
  EXPECT_THROW(incidence_angle(10.0, 30.0), DomainError);
  EXPECT_THROW(depression_angle(10.0, 30.0), DomainError);
}

TEST(GroundRangeWindow, Examples) {
  const auto [lo, hi] = ground_range_window(30.0, 50.0, deg2rad(30.0));
  EXPECT_NEAR(lo, 30.0 * std::tan(deg2rad(30.0)), 1e-12);
  EXPECT_NEAR(lo, 17.3205, 1e-4);
  EXPECT_NEAR(hi, 40.0, 1e-12);
  const auto [lo0, hi0] = ground_range_window(30.0, 50.0, 0.0);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_NEAR(hi0, 40.0, 1e-12);
  EXPECT_THROW(ground_range_window(30.0, 34.0, deg2rad(30.0)), DomainError);
}

TEST(GeometryProperties, RandomGeometry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> H(1.0, 100.0), F(1.0 + 1e-6, 20.0);
  for (int t = 0; t < 2000; ++t) {
    const double h = H(rng);
    const double rs = h * F(rng);
    const double rs2 = rs * (1.0 + 1e-3);
    const double rg = slant_to_ground(rs, h);
    EXPECT_NEAR((rg * rg + h * h) / (rs * rs), 1.0, 1e-9);
    EXPECT_NEAR(rg, test::naive_ground(rs, h), 1e-9 * rs);
    EXPECT_LT(rg, slant_to_ground(rs2, h));
    EXPECT_LT(incidence_angle(rs, h), incidence_angle(rs2, h));
    EXPECT_NEAR(incidence_angle(rs, h) + depression_angle(rs, h), std::numbers::pi / 2, 1e-12);
  }
}

TEST(SensorConfig, Validation) {
  SensorConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [](auto mutate) {
    SensorConfig x;
    mutate(x);
    return x;
  };
  EXPECT_THROW(bad([](SensorConfig& x) { x.slant_resolution_m = 0; }).validate(), DomainError);
  EXPECT_THROW(bad([](SensorConfig& x) { x.num_bins = 0; }).validate(), DomainError);
  EXPECT_THROW(bad([](SensorConfig& x) { x.theta0_deg = 90; }).validate(), DomainError);
  EXPECT_THROW(bad([](SensorConfig& x) { x.phi0_deg = 0; }).validate(), DomainError);
  EXPECT_THROW(bad([](SensorConfig& x) { x.k_phi = 0; }).validate(), DomainError);
  EXPECT_THROW(bad([](SensorConfig& x) { x.beam_exponent = 0; }).validate(), DomainError);
}

TEST(BuildPingGeometry, FirstRetainedBin) {
  SensorConfig c;
  c.slant_resolution_m = 0.5;
  c.num_bins = 100;
  const auto g = build_ping_geometry(30.0, c);
  const double cut = 30.0 / std::cos(deg2rad(30.0));
  // Smallest bin centre (j + 0.5) * 0.5 above 34.641 is bin 69 at 34.75.
  EXPECT_EQ(g.first_bin, 69u);
  EXPECT_DOUBLE_EQ(g.slant_ranges_m.front(), 34.75);
  EXPECT_GT(g.slant_ranges_m.front(), cut);
  EXPECT_LT(g.slant_ranges_m.front() - c.slant_resolution_m, cut);
  EXPECT_EQ(g.size(), 31u);
}

TEST(BuildPingGeometry, WaterColumnOnly) {
  SensorConfig c;
  c.num_bins = 100;
  EXPECT_THROW(build_ping_geometry(500.0, c), DomainError);
  EXPECT_THROW(build_ping_geometry(0.0, c), DomainError);
}

TEST(BuildPingGeometry, RetainedCountMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> H(2.0, 40.0), R(0.02, 0.5), T(5.0, 60.0);
  for (int t = 0; t < 300; ++t) {
    SensorConfig c;
    c.slant_resolution_m = R(rng);
    c.num_bins = 300 + static_cast<std::size_t>(t);
    c.theta0_deg = T(rng);
    const double h = H(rng);
    const double cut = h / std::cos(deg2rad(c.theta0_deg));
    std::size_t expected = 0;
    for (std::size_t j = 0; j < c.num_bins; ++j) {
      if ((j + 0.5) * c.slant_resolution_m >= cut) ++expected;
    }
    if (expected == 0) {
      EXPECT_THROW(build_ping_geometry(h, c), DomainError);
      continue;
    }
    const auto g = build_ping_geometry(h, c);
    ASSERT_EQ(g.size(), expected);
    EXPECT_EQ(g.first_bin + g.size(), c.num_bins);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_GT(g.slant_ranges_m[k], h);
      EXPECT_GE(g.ground_ranges_m[k], h * std::tan(deg2rad(c.theta0_deg)) - c.slant_resolution_m);
      if (k > 0) {
        EXPECT_GT(g.slant_ranges_m[k], g.slant_ranges_m[k - 1]);
        EXPECT_GT(g.ground_ranges_m[k], g.ground_ranges_m[k - 1]);
      }
    }
  }
}

TEST(BuildPingGeometry, BinExactlyOnCutIsRetained) {
  // h / cos(60 deg) = 2h lands exactly on a bin centre.
  SensorConfig c;
  c.slant_resolution_m = 1.0;
  c.num_bins = 40;
  c.theta0_deg = 60.0;
  const auto g = build_ping_geometry(10.25, c);
  EXPECT_DOUBLE_EQ(g.slant_ranges_m.front(), 20.5);
}

}  // namespace
}  // namespace sss
