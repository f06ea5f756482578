// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 + FMA variants, 4 doubles per register. This file is the only one
// built with -mavx2 -mfma; nothing here may run before the dispatcher has
// confirmed CPU support.

#include <immintrin.h>

#include <algorithm>

#include "sss/simd/kernels.hpp"

namespace sss::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void multiply(double* x, const double* g, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(g + i)));
  }
  for (; i < n; ++i) x[i] *= g[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

DotSums dot3(const double* f, const double* g, std::size_t n) {
  __m256d fg = _mm256_setzero_pd();
  __m256d ff = _mm256_setzero_pd();
  __m256d gg = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vf = _mm256_loadu_pd(f + i);
    const __m256d vg = _mm256_loadu_pd(g + i);
    fg = _mm256_fmadd_pd(vf, vg, fg);
    ff = _mm256_fmadd_pd(vf, vf, ff);
    gg = _mm256_fmadd_pd(vg, vg, gg);
  }
  DotSums s{hsum(fg), hsum(ff), hsum(gg)};
  for (; i < n; ++i) {
    s.fg += f[i] * g[i];
    s.ff += f[i] * f[i];
    s.gg += g[i] * g[i];
  }
  return s;
}

double chi_square(const double* a, const double* b, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d den = _mm256_add_pd(va, vb);
    const __m256d d = _mm256_sub_pd(va, vb);
    const __m256d nonzero = _mm256_cmp_pd(den, zero, _CMP_NEQ_OQ);
    // Substitute 1 for zero denominators, then mask the term away.
    const __m256d safe = _mm256_blendv_pd(one, den, nonzero);
    const __m256d term = _mm256_div_pd(_mm256_mul_pd(d, d), safe);
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, nonzero));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double den = a[i] + b[i];
    if (den != 0.0) {
      const double d = a[i] - b[i];
      s += d * d / den;
    }
  }
  return s;
}

void affine_clamp(double* x, std::size_t n, double offset, double scale) {
  const __m256d vo = _mm256_set1_pd(offset);
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vo), vs);
    // Operand order mirrors std::max(v, 0) / std::min(v, 1) so signed
    // zeros come out identical to the scalar path.
    v = _mm256_max_pd(zero, v);
    v = _mm256_min_pd(one, v);
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) x[i] = std::min(std::max((x[i] - offset) * scale, 0.0), 1.0);
}

void sparse_rows(const std::size_t* src, const std::size_t* off, const std::size_t* len,
                 const double* w, std::size_t rows, const double* x, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (len[r] == 0) continue;
    out[r] = dot(w + off[r], x + src[r], len[r]);
  }
}

constexpr KernelTable kAvx2{Isa::Avx2, multiply,     dot,        dot3,
                            chi_square, affine_clamp, sparse_rows};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace sss::simd
