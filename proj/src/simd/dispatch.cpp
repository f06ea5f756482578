// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <string>

#include "sss/simd/kernels.hpp"

namespace sss::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

namespace {

bool cpu_has_avx2() {
#if defined(SSS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* forced = std::getenv("SSS_SIMD");
  if (forced != nullptr && *forced != '\0') {
    const std::string name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == to_string(isa)) {
        if (const KernelTable* t = table_for(isa)) return *t;
        std::cerr << "warning: SSS_SIMD=" << name
                  << " is not available on this machine; using the default\n";
      }
    }
  }
  if (const KernelTable* t = table_for(Isa::Avx2)) return *t;
  if (const KernelTable* t = table_for(Isa::Neon)) return *t;
  return detail::scalar_table();
}

}  // namespace

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &detail::scalar_table();
    case Isa::Avx2:
#if defined(SSS_HAVE_AVX2_TU)
      return cpu_has_avx2() ? detail::avx2_table() : nullptr;
#else
      return nullptr;
#endif
    case Isa::Neon:
#if defined(SSS_HAVE_NEON_TU)
      return detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* t = table_for(isa)) out.push_back(t);
  }
  return out;
}

}  // namespace sss::simd
