// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "sss/log.hpp"
#include "sss/parallel.hpp"
#include "sss/simd/kernels.hpp"

namespace sss {

double correlation(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw ShapeError("correlation needs equally sized patches");
  const simd::DotSums s = simd::active().dot3(f.data(), g.data(), f.size());
  if (s.ff == 0.0 || s.gg == 0.0) {
    warn("correlation of an all-zero patch; score set to 0");
    return 0.0;
  }
  return s.fg / std::sqrt(s.ff * s.gg);
}

double correlation(const Matrix<double>& f, const Matrix<double>& g) {
  if (f.rows() != g.rows() || f.cols() != g.cols()) {
    throw ShapeError("correlation needs equally sized patches");
  }
  return correlation(f.flat(), g.flat());
}

namespace {

double centroid(const std::vector<PixelCoord>& kps, bool rows) {
  if (kps.empty()) return 0.0;
  double s = 0.0;
  for (const auto& kp : kps) s += static_cast<double>(rows ? kp.ping : kp.bin);
  return s / static_cast<double>(kps.size());
}

// Offsets (into a, into b) and common extent for one dimension.
struct AxisCrop {
  long start_a = 0;
  long start_b = 0;
  long extent = 0;
};

AxisCrop align_axis(long na, long nb, double ca, double cb) {
  AxisCrop c;
  c.extent = std::min(na, nb);
  if (na <= nb) {
    c.start_b = std::clamp(static_cast<long>(std::lround(cb - ca)), 0L, nb - na);
  } else {
    c.start_a = std::clamp(static_cast<long>(std::lround(ca - cb)), 0L, na - nb);
  }
  return c;
}

}  // namespace

std::pair<Matrix<double>, Matrix<double>> aligned_crops(const PatchPair& pair) {
  const auto& a = pair.patch_a;
  const auto& b = pair.patch_b;
  const AxisCrop rows = align_axis(static_cast<long>(a.rows()), static_cast<long>(b.rows()),
                                   centroid(pair.keypoints_a, true), centroid(pair.keypoints_b, true));
  const AxisCrop cols = align_axis(static_cast<long>(a.cols()), static_cast<long>(b.cols()),
                                   centroid(pair.keypoints_a, false), centroid(pair.keypoints_b, false));
  return {crop(a, {rows.start_a, cols.start_a, rows.extent, cols.extent}),
          crop(b, {rows.start_b, cols.start_b, rows.extent, cols.extent})};
}

Histogram histogram(std::span<const double> values, std::size_t bin_count) {
  if (bin_count == 0) throw DomainError("histogram needs at least one bin");
  if (values.empty()) throw DomainError("histogram of an empty patch");
  std::vector<double> counts(bin_count, 0.0);
  const auto nbins = static_cast<double>(bin_count);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("histogram values must lie in [0, 1]");
    const auto bin = std::min(static_cast<std::size_t>(v * nbins), bin_count - 1);
    counts[bin] += 1.0;
  }
  Histogram h;
  h.mass.resize(bin_count);
  const auto n = static_cast<double>(values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < bin_count; ++i) {
    h.mass[i] = counts[i] / n + kHistogramSmoothing;
    total += h.mass[i];
  }
  for (double& m : h.mass) m /= total;
  return h;
}

double kl_divergence(std::span<const double> h1, std::span<const double> h2) {
  if (h1.size() != h2.size()) throw ShapeError("histograms differ in bin count");
  double s = 0.0;
  for (std::size_t i = 0; i < h1.size(); ++i) {
    if (h1[i] <= 0.0) continue;
    s += h1[i] * std::log(h1[i] / h2[i]);
  }
  return s;
}

double chi_square(std::span<const double> h1, std::span<const double> h2) {
  if (h1.size() != h2.size()) throw ShapeError("histograms differ in bin count");
  return 2.0 * simd::active().chi_square(h1.data(), h2.data(), h1.size());
}

double improvement_ratio(double baseline, double treated, Direction direction) {
  if (baseline == 0.0) throw DomainError("improvement ratio undefined for a zero baseline");
  return direction == Direction::HigherBetter ? (treated - baseline) / baseline
                                              : (baseline - treated) / baseline;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Correlation: return "corr";
    case Metric::KlDivergence: return "kl";
    case Metric::ChiSquare: return "chi2";
  }
  return "?";
}

Metric metric_from_string(std::string_view name) {
  if (name == "corr") return Metric::Correlation;
  if (name == "kl") return Metric::KlDivergence;
  if (name == "chi2") return Metric::ChiSquare;
  throw FormatError("unknown metric '" + std::string(name) + "' (expected corr, kl or chi2)");
}

Direction direction_of(Metric metric) {
  return metric == Metric::Correlation ? Direction::HigherBetter : Direction::LowerBetter;
}

double pair_score(Metric metric, const PatchPair& pair, std::size_t bins) {
  switch (metric) {
    case Metric::Correlation: {
      const auto [a, b] = aligned_crops(pair);
      return correlation(a, b);
    }
    case Metric::KlDivergence:
      return kl_divergence(histogram(pair.patch_a.flat(), bins), histogram(pair.patch_b.flat(), bins));
    case Metric::ChiSquare:
      return chi_square(histogram(pair.patch_a.flat(), bins), histogram(pair.patch_b.flat(), bins));
  }
  throw DomainError("unknown metric");
}

EvaluationReport evaluate_dataset(const std::vector<PatchPair>& raw_pairs,
                                  const std::vector<MethodPairs>& canonical,
                                  const std::vector<Metric>& metrics, std::size_t bins) {
  for (const auto& m : canonical) {
    if (m.pairs.size() != raw_pairs.size()) {
      throw ShapeError("method '" + m.method + "' has " + std::to_string(m.pairs.size()) +
                       " pairs, raw has " + std::to_string(raw_pairs.size()));
    }
    for (std::size_t i = 0; i < raw_pairs.size(); ++i) {
      if (m.pairs[i].group_id != raw_pairs[i].group_id) {
        throw ShapeError("method '" + m.method + "' pair " + std::to_string(i) +
                         " is not aligned with the raw pair (group " +
                         std::to_string(m.pairs[i].group_id) + " vs " +
                         std::to_string(raw_pairs[i].group_id) + ")");
      }
    }
  }

  EvaluationReport report;
  report.histogram_bins = bins;
  report.metrics = metrics;
  report.methods.push_back("none");
  for (const auto& m : canonical) report.methods.push_back(m.method);
  for (const auto& p : raw_pairs) report.group_ids.push_back(p.group_id);

  const std::size_t n = raw_pairs.size();
  report.scores.assign(metrics.size(), std::vector<std::vector<double>>(report.methods.size(),
                                                                       std::vector<double>(n, 0.0)));
  for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
    for (std::size_t k = 0; k < report.methods.size(); ++k) {
      const auto& pairs = k == 0 ? raw_pairs : canonical[k - 1].pairs;
      auto& out = report.scores[mi][k];
      parallel_for(n, [&](std::size_t i) { out[i] = pair_score(metrics[mi], pairs[i], bins); });
    }
  }

  for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
    const Direction dir = direction_of(metrics[mi]);
    const auto& base = report.scores[mi][0];
    const double base_avg = n ? std::accumulate(base.begin(), base.end(), 0.0) / static_cast<double>(n) : 0.0;
    for (std::size_t k = 0; k < report.methods.size(); ++k) {
      const auto& s = report.scores[mi][k];
      ReportRow row;
      row.metric = metrics[mi];
      row.method = report.methods[k];
      row.pairs = n;
      row.average_score = n ? std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n) : 0.0;
      if (k > 0) {
        std::size_t improved = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const bool better = dir == Direction::HigherBetter ? s[i] > base[i] : s[i] < base[i];
          improved += better ? 1 : 0;
        }
        row.proportion_improved = n ? static_cast<double>(improved) / static_cast<double>(n) : 0.0;
        row.average_improvement =
            base_avg != 0.0 ? improvement_ratio(base_avg, row.average_score, dir) : 0.0;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string format_report_text(const EvaluationReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "metric" << std::setw(14) << "method" << std::right
      << std::setw(12) << "improved" << std::setw(16) << "average score" << std::setw(14)
      << "average rho" << '\n';
  out << std::string(64, '-') << '\n';
  for (const auto& row : report.rows) {
    out << std::left << std::setw(8) << to_string(row.metric) << std::setw(14) << row.method
        << std::right << std::setw(12);
    if (row.proportion_improved) {
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(2) << 100.0 * *row.proportion_improved << '%';
      out << pct.str();
    } else {
      out << "-";
    }
    out << std::setw(16) << std::fixed << std::setprecision(4) << row.average_score << std::setw(14);
    if (row.average_improvement) {
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(2) << 100.0 * *row.average_improvement << '%';
      out << pct.str();
    } else {
      out << "-";
    }
    out << '\n';
  }
  out << "(" << (report.group_ids.size()) << " pairs; KL uses patch a as H1; "
      << report.histogram_bins << " histogram bins)\n";
  return out.str();
}

}  // namespace sss
