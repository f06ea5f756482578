// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sss/intensity.hpp"
#include "sss/slantrange.hpp"

namespace sss {
namespace {

std::vector<double> dense_row(const WeightKernel& k, std::size_t i) {
  std::vector<double> row(k.num_sources, 0.0);
  const auto w = k.row_weights(i);
  for (std::size_t t = 0; t < w.size(); ++t) row[k.source_begin[i] + t] = w[t];
  return row;
}

IntensityPing corrected(std::vector<double> v) {
  IntensityPing p;
  p.values = std::move(v);
  p.stage = IntensityStage::IncidenceCorrected;
  return p;
}

TEST(SourceBinEdges, MidpointsAndEnds) {
  const std::vector<double> rg{1.0, 2.0, 4.0, 7.0};
  const auto e = source_bin_edges(rg);
  ASSERT_EQ(e.size(), 5u);
  EXPECT_EQ(e[0], 1.0);
  EXPECT_EQ(e[1], 1.5);
  EXPECT_EQ(e[2], 3.0);
  EXPECT_EQ(e[3], 5.5);
  EXPECT_EQ(e[4], 7.0);
  EXPECT_THROW(source_bin_edges(std::vector<double>{1.0, 1.0}), DomainError);
}

TEST(WeightKernel, OutputInsideOneSourceInterval) {
  const std::vector<double> rg{0.0, 10.0, 20.0, 30.0};
  const auto k = build_weight_kernel(rg, GroundGrid{1.0, 11.0, 2});
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_EQ(k.length[i], 1u);
    EXPECT_EQ(k.source_begin[i], 1u);
    EXPECT_EQ(k.row_weights(i)[0], 1.0);
  }
}

TEST(WeightKernel, SymmetricAboutBoundary) {
  const std::vector<double> rg{0.0, 10.0, 20.0, 30.0};
  // Source intervals 1 and 2 meet at 15; the output bin is [13, 17].
  const auto k = build_weight_kernel(rg, GroundGrid{4.0, 13.0, 1});
  ASSERT_EQ(k.length[0], 2u);
  EXPECT_EQ(k.source_begin[0], 1u);
  EXPECT_DOUBLE_EQ(k.row_weights(0)[0], 0.5);
  EXPECT_DOUBLE_EQ(k.row_weights(0)[1], 0.5);
}

TEST(WeightKernel, UncoveredBinsAreEmpty) {
  const std::vector<double> rg{10.0, 11.0, 12.0};
  const auto k = build_weight_kernel(rg, GroundGrid{0.5, 9.0, 8});
  EXPECT_TRUE(k.row_empty(0));
  EXPECT_TRUE(k.row_empty(1));
  EXPECT_FALSE(k.row_empty(2));
  EXPECT_FALSE(k.row_empty(5));
  EXPECT_TRUE(k.row_empty(6));
  EXPECT_THROW(build_weight_kernel(rg, GroundGrid{0.5, 20.0, 4}), DomainError);
}

TEST(WeightKernel, MatchesBruteForceOverlap) {
  SensorConfig c;
  c.slant_resolution_m = 0.5;
  c.num_bins = 512;
  const auto g = build_ping_geometry(30.0, c);
  const double delta = 0.3;
  const double start = std::ceil(g.ground_ranges_m.front() / delta) * delta;
  const auto bins = static_cast<std::size_t>((g.ground_ranges_m.back() - start) / delta);
  const GroundGrid grid{delta, start, bins};
  const auto k = build_weight_kernel(g, grid);
  const auto oracle = test::overlap_weights(g.ground_ranges_m, start, delta, bins);
  const auto iv = test::source_intervals(g.ground_ranges_m);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < bins; ++i) {
    const auto row = dense_row(k, i);
    for (std::size_t j = 0; j < row.size(); ++j) EXPECT_NEAR(row[j], oracle[i][j], 1e-12);
    if (k.row_empty(i)) continue;
    ++checked;
    // Fully covered rows: raw overlap lengths already sum to delta.
    const double a = grid.lower_edge(i), b = a + delta;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double len = std::max(0.0, std::min(b, iv[j].second) - std::max(a, iv[j].first));
      EXPECT_NEAR(row[j], len / delta, 1e-9);
    }
  }
  EXPECT_GT(checked, bins - 3);
}

TEST(WeightKernel, RowStochasticOverRandomGeometries) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> H(5.0, 40.0), D(0.02, 0.5), S(0.3, 3.0);
  for (int t = 0; t < 200; ++t) {
    SensorConfig c;
    c.slant_resolution_m = D(rng);
    c.num_bins = 256;
    const double h = H(rng);
    if (c.max_slant_range() < h / std::cos(deg2rad(c.theta0_deg)) + 4 * c.slant_resolution_m) continue;
    const auto g = build_ping_geometry(h, c);
    const double mean = (g.ground_ranges_m.back() - g.ground_ranges_m.front()) / (g.size() - 1);
    const double delta = mean * S(rng);
    const GroundGrid grid{delta, g.ground_ranges_m.front(),
                          static_cast<std::size_t>((g.ground_ranges_m.back() - g.ground_ranges_m.front()) / delta)};
    if (grid.num_bins == 0) continue;
    const auto k = build_weight_kernel(g, grid);
    for (std::size_t i = 0; i < k.rows(); ++i) {
      if (k.row_empty(i)) continue;
      double sum = 0.0;
      for (double w : k.row_weights(i)) {
        EXPECT_GE(w, 0.0);
        sum += w;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
      EXPECT_LT(k.source_begin[i] + k.length[i], k.num_sources + 1);
    }
  }
}

TEST(ResamplePing, ConstantStaysConstant) {
  SensorConfig c;
  const auto g = build_ping_geometry(12.0, c);
  const GroundGrid grid{0.07, 7.0, 600};
  const auto out = resample_ping(corrected(std::vector<double>(g.size(), 2.5)), build_weight_kernel(g, grid));
  std::size_t valid = 0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!out.valid[i]) continue;
    ++valid;
    EXPECT_NEAR(out.values[i], 2.5, 1e-12);
  }
  EXPECT_GT(valid, 500u);
}

TEST(ResamplePing, SingleWeightCopiesSource) {
  const std::vector<double> rg{0.0, 10.0, 20.0, 30.0};
  const auto k = build_weight_kernel(rg, GroundGrid{1.0, 21.0, 1});
  const auto out = resample_ping(corrected({1.0, 2.0, 3.0, 4.0}), k);
  EXPECT_EQ(out.values[0], 3.0);
  EXPECT_EQ(out.valid[0], 1);
}

TEST(ResamplePing, StageAndShapeChecked) {
  const std::vector<double> rg{0.0, 10.0, 20.0, 30.0};
  const auto k = build_weight_kernel(rg, GroundGrid{1.0, 21.0, 1});
  IntensityPing raw;
  raw.values = {1, 2, 3, 4};
  EXPECT_THROW(resample_ping(raw, k), StageError);
  EXPECT_THROW(resample_ping(corrected({1, 2}), k), ShapeError);
}

TEST(ResamplePing, ConvexityBound) {
  std::mt19937_64 rng(77);
  SensorConfig c;
  for (int t = 0; t < 50; ++t) {
    const auto g = build_ping_geometry(8.0 + t * 0.5, c);
    const auto v = test::random_values(rng, g.size(), -1.0, 3.0);
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    const GroundGrid grid{0.05 + 0.01 * t, g.ground_ranges_m.front(), 200};
    const auto out = resample_ping(corrected(v), build_weight_kernel(g, grid));
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (!out.valid[i]) continue;
      EXPECT_GE(out.values[i], lo);
      EXPECT_LE(out.values[i], hi);
    }
  }
}

TEST(OracleResample, ConstantAndLocality) {
  const std::vector<double> rg{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  const GroundGrid grid{0.25, 0.0, 20};
  const auto flat = oracle_resample(std::vector<double>(6, 4.0), rg, grid, 64);
  for (std::size_t i = 0; i < flat.values.size(); ++i) {
    if (flat.valid[i]) {
      EXPECT_NEAR(flat.values[i], 4.0, 1e-12);
    }
  }
  // Source 2 covers [1.5, 2.5].
  const auto spike = oracle_resample(std::vector<double>{0, 0, 1, 0, 0, 0}, rg, grid, 64);
  for (std::size_t i = 0; i < grid.num_bins; ++i) {
    const bool touches = grid.lower_edge(i + 1) > 1.5 && grid.lower_edge(i) < 2.5;
    if (!touches) {
      EXPECT_EQ(spike.values[i], 0.0) << i;
    }
  }
}

TEST(OracleResample, AgreesWithKernelAndConverges) {
  std::mt19937_64 rng(31);
  SensorConfig c;
  c.slant_resolution_m = 0.05;
  c.num_bins = 512;
  const auto g = build_ping_geometry(12.0, c);
  const auto v = test::random_values(rng, g.size(), 0.0, 1.0);
  const double mean = (g.ground_ranges_m.back() - g.ground_ranges_m.front()) / (g.size() - 1);
  const GroundGrid grid{mean, std::ceil(g.ground_ranges_m.front() / mean) * mean,
                        static_cast<std::size_t>((g.ground_ranges_m.back() - g.ground_ranges_m.front()) / mean) - 1};
  const auto fast = resample_ping(corrected(v), build_weight_kernel(g, grid));
  double err_lo = 0.0, err_hi = 0.0;
  const auto o1 = oracle_resample(v, g.ground_ranges_m, grid, 500);
  const auto o2 = oracle_resample(v, g.ground_ranges_m, grid, 1000);
  for (std::size_t i = 0; i < grid.num_bins; ++i) {
    if (!fast.valid[i] || !o1.valid[i] || !o2.valid[i]) continue;
    err_lo = std::max(err_lo, std::abs(fast.values[i] - o1.values[i]));
    err_hi = std::max(err_hi, std::abs(fast.values[i] - o2.values[i]));
  }
  EXPECT_LE(err_hi, 1e-3);
  EXPECT_LE(err_hi, err_lo + 1e-12);
}

TEST(Resample, NearIdempotentOnUniformGrid) {
  const GroundGrid grid{0.2, 10.0, 300};
  std::vector<double> centres(grid.num_bins);
  for (std::size_t i = 0; i < grid.num_bins; ++i) centres[i] = grid.center(i);
  std::mt19937_64 rng(8);
  const auto v = test::random_values(rng, grid.num_bins, 0.0, 1.0);
  const auto out = resample_values(v, build_weight_kernel(centres, grid));
  for (std::size_t i = 1; i + 1 < grid.num_bins; ++i) {
    ASSERT_TRUE(out.valid[i]);
    EXPECT_NEAR(out.values[i], v[i], 1e-9);
  }
}

TEST(Resample, ResolutionIndependence) {
  SensorConfig c;
  const auto g = build_ping_geometry(20.0, c);
  std::mt19937_64 rng(15);
  const auto v = test::random_values(rng, g.size(), 0.0, 1.0);
  const double delta = 0.1;
  const double start = std::ceil(g.ground_ranges_m.front() / (2 * delta)) * 2 * delta;
  const auto n2 = static_cast<std::size_t>((g.ground_ranges_m.back() - start) / (2 * delta));
  const GroundGrid fine{delta, start, 2 * n2};
  const GroundGrid coarse{2 * delta, start, n2};

  const auto direct = resample_values(v, build_weight_kernel(g, coarse));
  const auto step1 = resample_values(v, build_weight_kernel(g, fine));
  // Re-grid the fine bins, treating each as a source at its centre.
  std::vector<double> centres(fine.num_bins);
  for (std::size_t i = 0; i < fine.num_bins; ++i) centres[i] = fine.center(i);
  const auto step2 = resample_values(step1.values, build_weight_kernel(centres, coarse));
  for (std::size_t i = 1; i + 1 < n2; ++i) {
    if (!direct.valid[i] || !step1.valid[2 * i] || !step1.valid[2 * i + 1]) continue;
    EXPECT_NEAR(step2.values[i], direct.values[i], 1e-6);
  }
}

TEST(SlantRangeCorrect, OutputLengthAtMeanSpacing) {
  SensorConfig c;
  const auto g = build_ping_geometry(15.0, c);
  const double span = g.ground_ranges_m.back() - g.ground_ranges_m.front();
  const double mean = span / static_cast<double>(g.size() - 1);
  const GroundGrid grid{mean, g.ground_ranges_m.front(), g.size()};
  IntensityPing raw;
  raw.values.assign(g.size(), 1.0);
  const auto beam = correct_beam_pattern(raw, g, c);
  const auto out = slant_range_correct(correct_incidence(beam, g, LambertianLaw::Cos), 15.0, c, grid);
  const auto valid = static_cast<long>(std::count(out.valid.begin(), out.valid.end(), 1));
  EXPECT_LE(std::abs(valid - static_cast<long>(g.size())), 1);
}

}  // namespace
}  // namespace sss
