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

#include <span>

#include "cfjam/geometry.hpp"
#include "cfjam/random.hpp"

namespace cfjam::mobility {

enum class VelocitySupport { Signed, Positive };

/// Controlled random walk parameters, SI units throughout.
struct MobilityParams {
  double area_side = 1000.0;                       // L (m)
  double v_max = 6.0 / 3.6;                        // m/s
  double sigma_w = 0.5;                            // m/s, std of the per-step velocity perturbation
  double sample_time = 1.0;                        // T (s)
  double d_min = 10.0;                             // minimum UE-AP distance (m)
  VelocitySupport velocity_support = VelocitySupport::Signed;

  void validate() const;
};

struct UEState {
  Point position;
  Point ref_velocity;  // (vx, vy) in m/s

  friend bool operator==(const UEState&, const UEState&) = default;
};

inline constexpr int kMaxPlacementAttempts = 10000;

/// Uniform placement in [0, L]^2, resampled until every AP is at least d_min away.
/// Throws Configuration after kMaxPlacementAttempts rejections.
UEState init_ue(RandomStream& rng, const MobilityParams& params, std::span<const Point> ap_positions);

/// One step of x' = x + (v + w) T. Leaving the box re-initializes the UE (position and velocity);
/// landing within d_min of an AP keeps the previous position.
UEState step_ue(RandomStream& rng, const UEState& state, const MobilityParams& params,
                std::span<const Point> ap_positions);

bool respects_min_distance(Point p, double d_min, std::span<const Point> ap_positions);

}  // namespace cfjam::mobility
