// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sss::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Sums needed by the normalized correlation.
struct DotSums {
  double fg = 0.0;
  double ff = 0.0;
  double gg = 0.0;
};

/// Inner loops shared by the correction pipeline and the metrics. Every
/// variant must agree with the scalar reference: element-wise kernels
/// bit-exactly, reductions to within reassociation error.
struct KernelTable {
  Isa isa;
  /// x[i] *= g[i]
  void (*multiply)(double* x, const double* g, std::size_t n);
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum f*g, f*f and g*g in one pass.
  DotSums (*dot3)(const double* f, const double* g, std::size_t n);
  /// sum_i (a[i]-b[i])^2 / (a[i]+b[i]); terms with a zero denominator add 0.
  double (*chi_square)(const double* a, const double* b, std::size_t n);
  /// x[i] = clamp((x[i] - offset) * scale, 0, 1)
  void (*affine_clamp)(double* x, std::size_t n, double offset, double scale);
  /// Row-wise sparse gather: out[r] = sum_k w[off[r]+k] * x[src[r]+k] for
  /// k < len[r]. Rows with len 0 are left untouched.
  void (*sparse_rows)(const std::size_t* src, const std::size_t* off, const std::size_t* len,
                      const double* w, std::size_t rows, const double* x, double* out);
};

/// Kernels for the ISA picked at first use: the best one the CPU supports,
/// unless SSS_SIMD=scalar|avx2|neon overrides it.
const KernelTable& active();

/// Kernels for one specific ISA, or nullptr when not compiled in or not
/// supported by this CPU.
const KernelTable* table_for(Isa isa);

/// All variants usable on this machine, scalar first.
std::vector<const KernelTable*> available();

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace sss::simd
