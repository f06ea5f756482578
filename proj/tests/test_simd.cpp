// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sss/simd/kernels.hpp"

namespace sss::simd {
namespace {

// Reductions may reassociate; allow a few ulps of the absolute sum.
double reduction_tolerance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]) + a[i] * a[i] + b[i] * b[i];
  return 1e-14 * (s + 1.0);
}

TEST(Simd, ScalarAlwaysAvailable) {
  const auto all = available();
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front()->isa, Isa::Scalar);
  EXPECT_NE(table_for(Isa::Scalar), nullptr);
  EXPECT_EQ(to_string(Isa::Avx2), "avx2");
  std::cout << "active kernels: " << to_string(active().isa) << '\n';
}

TEST(Simd, VariantsMatchScalar) {
  const KernelTable& ref = detail::scalar_table();
  std::mt19937_64 rng(17);
  for (const KernelTable* k : available()) {
    SCOPED_TRACE(std::string(to_string(k->isa)));
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 64u, 65u, 1000u, 1023u}) {
      const auto a = test::random_values(rng, n, -2.0, 3.0);
      auto b = test::random_values(rng, n, 0.0, 1.0);
      if (n > 2) b[1] = -a[1];  // zero denominator in chi-square

      auto x1 = a, x2 = a;
      ref.multiply(x1.data(), b.data(), n);
      k->multiply(x2.data(), b.data(), n);
      EXPECT_EQ(x1, x2);

      const double tol = reduction_tolerance(a, b);
      EXPECT_NEAR(k->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), tol);
      const DotSums s1 = ref.dot3(a.data(), b.data(), n);
      const DotSums s2 = k->dot3(a.data(), b.data(), n);
      EXPECT_NEAR(s1.fg, s2.fg, tol);
      EXPECT_NEAR(s1.ff, s2.ff, tol);
      EXPECT_NEAR(s1.gg, s2.gg, tol);

      const auto pa = test::random_values(rng, n, 0.0, 1.0);
      auto pb = test::random_values(rng, n, 0.0, 1.0);
      if (n > 3) pb[3] = 0.0;
      auto pa0 = pa;
      if (n > 3) pa0[3] = 0.0;
      EXPECT_NEAR(k->chi_square(pa0.data(), pb.data(), n), ref.chi_square(pa0.data(), pb.data(), n),
                  1e-13 * (static_cast<double>(n) + 1.0));

      auto c1 = a, c2 = a;
      ref.affine_clamp(c1.data(), n, -0.5, 0.4);
      k->affine_clamp(c2.data(), n, -0.5, 0.4);
      EXPECT_EQ(c1, c2);
    }
  }
}

TEST(Simd, SparseRowsMatchScalar) {
  const KernelTable& ref = detail::scalar_table();
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> len_d(0, 9);
  const std::size_t rows = 300;
  std::vector<std::size_t> src(rows), off(rows), len(rows);
  std::size_t total = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    len[r] = len_d(rng);
    src[r] = r;
    off[r] = total;
    total += len[r];
  }
  const auto w = test::random_values(rng, total, 0.0, 1.0);
  const auto x = test::random_values(rng, rows + 10, -1.0, 1.0);
  for (const KernelTable* k : available()) {
    std::vector<double> o1(rows, -7.0), o2(rows, -7.0);
    ref.sparse_rows(src.data(), off.data(), len.data(), w.data(), rows, x.data(), o1.data());
    k->sparse_rows(src.data(), off.data(), len.data(), w.data(), rows, x.data(), o2.data());
    for (std::size_t r = 0; r < rows; ++r) {
      if (len[r] == 0) {
        EXPECT_EQ(o2[r], -7.0);
      }
      EXPECT_NEAR(o1[r], o2[r], 1e-14) << to_string(k->isa) << " row " << r;
    }
  }
}

}  // namespace
}  // namespace sss::simd
