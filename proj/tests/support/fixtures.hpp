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

#include <filesystem>
#include <string>

#include "cfjam/dataset.hpp"

namespace cfjam::testkit {

/// Fresh, empty directory under the system temp directory, unique per process and name.
std::filesystem::path scratch_dir(const std::string& name);

/// Default scenario shortened to `n_steps` steps.
dataset::ScenarioConfig short_scenario(int n_steps, std::uint64_t seed);

/// Relative difference |a - b| / max(|a|, |b|), zero when both vanish.
double rel_diff(double a, double b);

}  // namespace cfjam::testkit
