// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

// AArch64 NEON variants, 2 doubles per register. Advanced SIMD is mandatory
// on AArch64, so no runtime probe is needed.

#include <arm_neon.h>

#include <algorithm>

#include "sss/simd/kernels.hpp"

namespace sss::simd {
namespace {

void multiply(double* x, const double* g, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(g + i)));
  for (; i < n; ++i) x[i] *= g[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

DotSums dot3(const double* f, const double* g, std::size_t n) {
  float64x2_t fg = vdupq_n_f64(0.0);
  float64x2_t ff = vdupq_n_f64(0.0);
  float64x2_t gg = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vf = vld1q_f64(f + i);
    const float64x2_t vg = vld1q_f64(g + i);
    fg = vfmaq_f64(fg, vf, vg);
    ff = vfmaq_f64(ff, vf, vf);
    gg = vfmaq_f64(gg, vg, vg);
  }
  DotSums s{vaddvq_f64(fg), vaddvq_f64(ff), vaddvq_f64(gg)};
  for (; i < n; ++i) {
    s.fg += f[i] * g[i];
    s.ff += f[i] * f[i];
    s.gg += g[i] * g[i];
  }
  return s;
}

double chi_square(const double* a, const double* b, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t acc = zero;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    const float64x2_t den = vaddq_f64(va, vb);
    const float64x2_t d = vsubq_f64(va, vb);
    const uint64x2_t is_zero = vceqq_f64(den, zero);
    const float64x2_t safe = vbslq_f64(is_zero, one, den);
    const float64x2_t term = vdivq_f64(vmulq_f64(d, d), safe);
    acc = vaddq_f64(acc, vbslq_f64(is_zero, zero, term));
  }
  double s = vaddvq_f64(acc);
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
  const float64x2_t vo = vdupq_n_f64(offset);
  const float64x2_t vs = vdupq_n_f64(scale);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vmulq_f64(vsubq_f64(vld1q_f64(x + i), vo), vs);
    // Select-based clamp keeps the scalar std::max/std::min tie behaviour.
    v = vbslq_f64(vcltq_f64(v, zero), zero, v);
    v = vbslq_f64(vcltq_f64(one, v), one, v);
    vst1q_f64(x + i, v);
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

constexpr KernelTable kNeon{Isa::Neon, multiply,     dot,        dot3,
                            chi_square, affine_clamp, sparse_rows};

}  // namespace

namespace detail {
const KernelTable* neon_table() { return &kNeon; }
}  // namespace detail

}  // namespace sss::simd
