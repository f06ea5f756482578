// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#include "sss/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace sss {

void warn(std::string_view msg) {
  static std::mutex mutex;
  const char* quiet = std::getenv("SSS_QUIET");
  if (quiet != nullptr && *quiet != '\0' && *quiet != '0') return;
  std::lock_guard lock(mutex);
  std::cerr << "warning: " << msg << '\n';
}

}  // namespace sss
