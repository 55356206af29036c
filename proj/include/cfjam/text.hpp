// SPDX-License-Identifier: Apache-2.0
//
// cfjam: jamming detection for cell-free MIMO networks with dynamic graphs
// Copyright 2026 The cfjam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfjam::text {

/// Shortest decimal form that parses back to the identical binary64 value.
std::string format_double(double value);
/// Strict parse of the whole token; returns false on any trailing garbage.
bool parse_double(std::string_view token, double& out);
bool parse_int(std::string_view token, long long& out);

std::vector<std::string_view> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

std::string read_file(const std::string& path);

}  // namespace cfjam::text
