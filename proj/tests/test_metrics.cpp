// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sss/metrics.hpp"

namespace sss {
namespace {

Matrix<double> mat(std::size_t rows, std::size_t cols, std::vector<double> v) {
  Matrix<double> m(rows, cols);
  std::copy(v.begin(), v.end(), m.flat().begin());
  return m;
}

Matrix<double> random_patch(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  return mat(rows, cols, test::random_values(rng, rows * cols, 0.0, 1.0));
}

// Plain double loops, no SIMD.
double naive_correlation(const Matrix<double>& f, const Matrix<double>& g) {
  long double fg = 0, ff = 0, gg = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    fg += f.flat()[i] * g.flat()[i];
    ff += f.flat()[i] * f.flat()[i];
    gg += g.flat()[i] * g.flat()[i];
  }
  return static_cast<double>(fg / std::sqrt(ff * gg));
}

TEST(Correlation, HandValues) {
  const auto f = mat(1, 2, {1, 0});
  EXPECT_NEAR(correlation(f, f), 1.0, 1e-12);
  EXPECT_EQ(correlation(f, mat(1, 2, {0, 1})), 0.0);
  EXPECT_NEAR(correlation(mat(1, 2, {1, 1}), mat(1, 2, {2, 2})), 1.0, 1e-12);
  EXPECT_EQ(correlation(mat(1, 2, {0, 0}), f), 0.0);
  EXPECT_THROW(correlation(f, mat(2, 1, {1, 0})), ShapeError);
}

TEST(Correlation, PropertiesOnRandomPatches) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 37);
    const auto f = random_patch(rng, n, n + 3);
    auto g = random_patch(rng, n, n + 3);
    const double r = correlation(f, g);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0 + 1e-12);
    EXPECT_NEAR(r, naive_correlation(f, g), 1e-12);
    EXPECT_NEAR(correlation(f, f), 1.0, 1e-12);
    const double c = scale(rng);
    auto cg = g;
    for (double& v : cg.flat()) v *= c;
    EXPECT_NEAR(correlation(f, cg), r, 1e-12);
  }
}

TEST(AlignedCrops, CentroidsAligned) {
  PatchPair p;
  p.patch_a = mat(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  p.patch_b = Matrix<double>(5, 7, 0.0);
  p.keypoints_a = {{1, 1}};
  p.keypoints_b = {{3, 2}};
  const auto [a, b] = aligned_crops(p);
  EXPECT_EQ(a, p.patch_a);
  EXPECT_EQ(b, crop(p.patch_b, {2, 1, 3, 3}));

  p.keypoints_b = {{0, 0}};  // clamped inside b
  EXPECT_EQ(aligned_crops(p).second, crop(p.patch_b, {0, 0, 3, 3}));
}

TEST(Histogram, Examples) {
  const Histogram c = histogram(std::vector<double>(50, 0.3), 64);
  const auto top = std::max_element(c.mass.begin(), c.mass.end());
  EXPECT_EQ(top - c.mass.begin(), 19);
  EXPECT_NEAR(*top, 1.0, 1e-8);
  double sum = 0.0;
  for (double m : c.mass) {
    EXPECT_GT(m, 0.0);
    sum += m;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);

  std::vector<double> ramp(128);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = (static_cast<double>(i) + 0.5) / 128.0;
  for (double m : histogram(ramp, 64).mass) EXPECT_NEAR(m, 1.0 / 64.0, 1e-12);

  EXPECT_NEAR(histogram(std::vector<double>{1.0}, 4).mass[3], 1.0, 1e-9);
  EXPECT_THROW(histogram(std::vector<double>{1.5}, 4), DomainError);
  EXPECT_THROW(histogram(std::vector<double>{}, 4), DomainError);
}

TEST(KlDivergence, HandValues) {
  const std::vector<double> h1{0.5, 0.5}, h2{0.25, 0.75};
  const double direct = 0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.75);
  EXPECT_NEAR(kl_divergence(h1, h2), direct, 1e-15);
  EXPECT_NEAR(kl_divergence(h1, h2), 0.1438, 1e-4);
  EXPECT_NEAR(kl_divergence(h2, h1), 0.1308, 1e-4);
  EXPECT_EQ(kl_divergence(h1, h1), 0.0);
  EXPECT_THROW(kl_divergence(h1, std::vector<double>{1.0}), ShapeError);
}

TEST(ChiSquare, HandValues) {
  EXPECT_EQ(chi_square(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 4.0);
  EXPECT_EQ(chi_square(std::vector<double>{0, 0.5, 0.5}, std::vector<double>{0, 0.5, 0.5}), 0.0);
  EXPECT_NEAR(chi_square(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}),
              2.0 * (0.0625 / 0.75 + 0.0625 / 1.25), 1e-15);
}

TEST(HistogramDistances, PropertiesOnRandomHistograms) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    std::mt19937_64 r2(rng());
    const auto a = histogram(test::random_values(r2, 300, 0.0, 1.0));
    const auto b = histogram(test::random_values(r2, 300, 0.0, 0.7));
    EXPECT_GE(kl_divergence(a, b), 0.0);
    EXPECT_GT(kl_divergence(a, b), 0.0);
    EXPECT_NEAR(kl_divergence(a, a), 0.0, 1e-15);
    EXPECT_GT(chi_square(a, b), 0.0);
    EXPECT_NEAR(chi_square(a, b), chi_square(b, a), 1e-12);
    EXPECT_EQ(chi_square(a, a), 0.0);
  }
}

TEST(ImprovementRatio, Examples) {
  EXPECT_NEAR(improvement_ratio(0.6905, 0.9287, Direction::HigherBetter), 0.3450, 1e-4);
  EXPECT_NEAR(improvement_ratio(485.37, 298.59, Direction::LowerBetter), 0.3848, 1e-4);
  EXPECT_EQ(improvement_ratio(0.4, 0.4, Direction::HigherBetter), 0.0);
  EXPECT_EQ(improvement_ratio(0.4, 0.4, Direction::LowerBetter), 0.0);
  EXPECT_THROW(improvement_ratio(0.0, 1.0, Direction::HigherBetter), DomainError);
}

TEST(MetricNames, RoundTrip) {
  for (Metric m : {Metric::Correlation, Metric::KlDivergence, Metric::ChiSquare}) {
    EXPECT_EQ(metric_from_string(to_string(m)), m);
  }
  EXPECT_EQ(direction_of(Metric::Correlation), Direction::HigherBetter);
  EXPECT_EQ(direction_of(Metric::ChiSquare), Direction::LowerBetter);
  EXPECT_THROW(metric_from_string("l2"), FormatError);
}

std::vector<PatchPair> random_pairs(std::mt19937_64& rng, std::size_t n) {
  std::vector<PatchPair> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].group_id = i;
    out[i].patch_a = random_patch(rng, 9, 11);
    out[i].patch_b = random_patch(rng, 10, 8);
    out[i].keypoints_a = {{4, 5}};
    out[i].keypoints_b = {{5, 4}};
  }
  return out;
}

TEST(EvaluateDataset, ShapeAndBaseline) {
  std::mt19937_64 rng(2);
  const auto raw = random_pairs(rng, 60);
  std::vector<MethodPairs> methods;
  for (const char* name : {"cos", "cos2", "cot"}) methods.push_back({name, random_pairs(rng, 60)});
  const std::vector<Metric> metrics{Metric::Correlation, Metric::KlDivergence, Metric::ChiSquare};
  const auto report = evaluate_dataset(raw, methods, metrics);
  ASSERT_EQ(report.rows.size(), 12u);
  EXPECT_EQ(report.methods.front(), "none");
  EXPECT_EQ(report.group_ids.size(), 60u);
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const auto& row = report.rows[k];
    EXPECT_EQ(row.metric, metrics[k / 4]);
    EXPECT_EQ(row.pairs, 60u);
    if (k % 4 == 0) {
      EXPECT_FALSE(row.proportion_improved.has_value());
    } else {
      ASSERT_TRUE(row.proportion_improved.has_value());
      EXPECT_GE(*row.proportion_improved, 0.0);
      EXPECT_LE(*row.proportion_improved, 1.0);
    }
  }
  // Averages recomputed from the per-pair scores.
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 4; ++k) {
      double sum = 0.0;
      for (double s : report.scores[m][k]) sum += s;
      EXPECT_NEAR(report.rows[m * 4 + k].average_score, sum / 60.0, 1e-12);
    }
  }
  const std::string text = format_report_text(report);
  EXPECT_NE(text.find("cos2"), std::string::npos);
}

TEST(EvaluateDataset, IdenticalMethodsShowNoImprovement) {
  std::mt19937_64 rng(3);
  const auto raw = random_pairs(rng, 5);
  const auto report = evaluate_dataset(raw, {{"cos", raw}}, {Metric::Correlation, Metric::ChiSquare});
  for (const auto& row : report.rows) {
    if (!row.proportion_improved) continue;
    EXPECT_EQ(*row.proportion_improved, 0.0);
    EXPECT_EQ(*row.average_improvement, 0.0);
  }
}

TEST(EvaluateDataset, SinglePairImproved) {
  PatchPair raw;
  raw.patch_a = mat(1, 2, {1, 0});
  raw.patch_b = mat(1, 2, {1, 1});
  raw.keypoints_a = raw.keypoints_b = {{0, 0}};
  PatchPair better = raw;
  better.patch_b = mat(1, 2, {1, 0.1});
  const auto report = evaluate_dataset({raw}, {{"cos2", {better}}}, {Metric::Correlation});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(*report.rows[1].proportion_improved, 1.0);
  const double expected = (correlation(better.patch_a, better.patch_b) - std::sqrt(0.5)) / std::sqrt(0.5);
  EXPECT_NEAR(*report.rows[1].average_improvement, expected, 1e-12);
}

TEST(EvaluateDataset, MisalignedListsRejected) {
  std::mt19937_64 rng(4);
  const auto raw = random_pairs(rng, 4);
  auto fewer = raw;
  fewer.pop_back();
  EXPECT_THROW(evaluate_dataset(raw, {{"cos", fewer}}, {Metric::Correlation}), ShapeError);
  auto shuffled = raw;
  std::swap(shuffled[0], shuffled[1]);
  EXPECT_THROW(evaluate_dataset(raw, {{"cos", shuffled}}, {Metric::Correlation}), ShapeError);
}

}  // namespace
}  // namespace sss
