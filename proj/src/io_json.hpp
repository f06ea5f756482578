// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

namespace sss::io::detail {

using json = nlohmann::json;

json load_json(const std::filesystem::path& path);
void save_json(const json& doc, const std::filesystem::path& path);
/// Checks the "format" and "version" keys.
void expect_format(const json& doc, std::string_view format, const std::filesystem::path& path);

}  // namespace sss::io::detail
