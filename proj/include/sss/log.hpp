// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace sss {

/// Prints "warning: <msg>" to stderr unless SSS_QUIET is set.
void warn(std::string_view msg);

}  // namespace sss
