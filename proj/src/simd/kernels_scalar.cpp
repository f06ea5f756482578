// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations. These define the semantics every vectorized
// variant is tested against.

#include <algorithm>

#include "sss/simd/kernels.hpp"

namespace sss::simd {
namespace {

void multiply(double* x, const double* g, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= g[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

DotSums dot3(const double* f, const double* g, std::size_t n) {
  DotSums s;
  for (std::size_t i = 0; i < n; ++i) {
    s.fg += f[i] * g[i];
    s.ff += f[i] * f[i];
    s.gg += g[i] * g[i];
  }
  return s;
}

double chi_square(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double den = a[i] + b[i];
    if (den != 0.0) {
      const double d = a[i] - b[i];
      s += d * d / den;
    }
  }
  return s;
}

void affine_clamp(double* x, std::size_t n, double offset, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::min(std::max((x[i] - offset) * scale, 0.0), 1.0);
  }
}

void sparse_rows(const std::size_t* src, const std::size_t* off, const std::size_t* len,
                 const double* w, std::size_t rows, const double* x, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (len[r] == 0) continue;
    out[r] = dot(w + off[r], x + src[r], len[r]);
  }
}

constexpr KernelTable kScalar{Isa::Scalar, multiply,     dot,        dot3,
                              chi_square,  affine_clamp, sparse_rows};

}  // namespace

namespace detail {
const KernelTable& scalar_table() { return kScalar; }
}  // namespace detail

}  // namespace sss::simd
