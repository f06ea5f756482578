// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sss/core.hpp"
#include "sss/patches.hpp"

namespace sss {

/// Normalized (uncentred) correlation sum FG / sqrt(sum F^2 sum G^2).
/// Shapes must match. If either patch is all zero the score is defined as 0
/// and a warning is printed.
double correlation(const Matrix<double>& f, const Matrix<double>& g);
double correlation(std::span<const double> f, std::span<const double> g);

/// Equal-size views of a pair for pixel-wise comparison: in each dimension
/// the larger patch is cropped to the smaller extent with the keypoint
/// centroids of the two patches aligned (no resampling).
std::pair<Matrix<double>, Matrix<double>> aligned_crops(const PatchPair& pair);

inline constexpr std::size_t kDefaultHistogramBins = 64;
inline constexpr double kHistogramSmoothing = 1e-10;

/// Probability masses over uniform bins of [0, 1].
struct Histogram {
  std::vector<double> mass;
  std::size_t bin_count() const { return mass.size(); }
};

/// Counts over `bin_count` uniform bins of [0, 1] (1.0 falls in the last
/// bin), turned into probabilities, smoothed by kHistogramSmoothing and
/// renormalized. Values outside [0, 1] are rejected.
Histogram histogram(std::span<const double> values, std::size_t bin_count = kDefaultHistogramBins);

/// sum H1 ln(H1 / H2). Not symmetric: H1 is the reference.
double kl_divergence(std::span<const double> h1, std::span<const double> h2);
inline double kl_divergence(const Histogram& h1, const Histogram& h2) {
  return kl_divergence(h1.mass, h2.mass);
}

/// 2 sum (H1 - H2)^2 / (H1 + H2), skipping empty bins.
double chi_square(std::span<const double> h1, std::span<const double> h2);
inline double chi_square(const Histogram& h1, const Histogram& h2) { return chi_square(h1.mass, h2.mass); }

enum class Direction { HigherBetter, LowerBetter };

/// (treated - baseline) / baseline for HigherBetter, (baseline - treated) /
/// baseline for LowerBetter. Throws DomainError for a zero baseline.
double improvement_ratio(double baseline, double treated, Direction direction);

enum class Metric { Correlation, KlDivergence, ChiSquare };

std::string_view to_string(Metric metric);
/// "corr", "kl", "chi2".
Metric metric_from_string(std::string_view name);
Direction direction_of(Metric metric);

/// Score of one pair: correlation on aligned_crops, histogram distances on
/// the full patches (H1 from patch a).
double pair_score(Metric metric, const PatchPair& pair, std::size_t bins = kDefaultHistogramBins);

/// Pairs of one method, index-aligned with the raw pairs.
struct MethodPairs {
  std::string method;
  std::vector<PatchPair> pairs;
};

struct ReportRow {
  Metric metric = Metric::Correlation;
  std::string method;
  std::size_t pairs = 0;
  double average_score = 0.0;
  /// Unset for the raw baseline row.
  std::optional<double> proportion_improved;
  /// Improvement of the average score over the raw average.
  std::optional<double> average_improvement;
};

struct EvaluationReport {
  std::size_t histogram_bins = kDefaultHistogramBins;
  std::vector<std::string> methods;  // "none" first
  std::vector<Metric> metrics;
  std::vector<ReportRow> rows;       // metric-major, methods in order
  /// Per-pair group ids and scores, scores[metric][method][pair].
  std::vector<std::size_t> group_ids;
  std::vector<std::vector<std::vector<double>>> scores;
};

/// Scores every pair of every method with every metric and summarizes
/// against the raw baseline ("none"). Throws ShapeError if a method's pairs
/// are not index-aligned with the raw pairs (same count and group ids).
EvaluationReport evaluate_dataset(const std::vector<PatchPair>& raw_pairs,
                                  const std::vector<MethodPairs>& canonical,
                                  const std::vector<Metric>& metrics,
                                  std::size_t bins = kDefaultHistogramBins);

/// Aligned plain-text rendering.
std::string format_report_text(const EvaluationReport& report);

}  // namespace sss
