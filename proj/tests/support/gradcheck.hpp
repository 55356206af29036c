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
#include <vector>

namespace cfjam::testkit {

/// One compared tensor: analytic gradient versus central finite differences.
struct GradCheck {
  std::string name;
  double rel_error = 0.0;  // ||analytic - numeric|| / max(||analytic||, ||numeric||, floor)
  std::size_t coordinates = 0;
};

inline constexpr double kGradTolerance = 1e-4;

/// Checks every layer (layer norm, GELU, gated graph convolution, attention, encoder layer,
/// classifier) on random inputs and parameters drawn from `seed`.
std::vector<GradCheck> check_layers(std::uint64_t seed);

/// End-to-end cross-entropy gradient of a reduced-width model, every coordinate, dropout active.
std::vector<GradCheck> check_model_small(std::uint64_t seed);

/// End-to-end gradient of the default-size model: per tensor, the derivative along a random direction
/// spanning every coordinate.
std::vector<GradCheck> check_model_directional(std::uint64_t seed);

double worst(const std::vector<GradCheck>& checks);

}  // namespace cfjam::testkit
