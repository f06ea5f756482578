// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace sss {

/// Worker count: SSS_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks over
/// thread_count() threads. Bodies must write disjoint outputs; the first
/// exception thrown by any chunk is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sss
