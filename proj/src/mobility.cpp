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
#include "cfjam/mobility.hpp"

#include <string>

#include "cfjam/error.hpp"

namespace cfjam::mobility {

void MobilityParams::validate() const {
  require(area_side > 0.0, ErrorCode::Configuration, "mobility.area_side must be positive");
  require(v_max >= 0.0, ErrorCode::Configuration, "mobility.v_max_kmh must be non-negative");
  require(sigma_w >= 0.0, ErrorCode::Configuration, "mobility.sigma_w must be non-negative");
  require(sample_time > 0.0, ErrorCode::Configuration, "mobility.sample_time must be positive");
  require(d_min >= 0.0 && d_min < area_side / 2.0, ErrorCode::Configuration,
          "mobility.d_min must lie in [0, area_side/2)");
}

bool respects_min_distance(Point p, double d_min, std::span<const Point> ap_positions) {
  for (const auto& ap : ap_positions) {
    if (distance(p, ap) < d_min) return false;
  }
  return true;
}

UEState init_ue(RandomStream& rng, const MobilityParams& params, std::span<const Point> ap_positions) {
  for (const auto& ap : ap_positions) {
    require(inside_box(ap, params.area_side), ErrorCode::Configuration, "AP position outside the area");
  }
  UEState ue;
  int attempts = 0;
  do {
    if (attempts++ >= kMaxPlacementAttempts) {
      fail(ErrorCode::Configuration, "could not place a UE at least d_min=" + std::to_string(params.d_min) +
                                         " m from every AP after " + std::to_string(kMaxPlacementAttempts) +
                                         " attempts; d_min is too large");
    }
    ue.position = {rng.uniform(0.0, params.area_side), rng.uniform(0.0, params.area_side)};
  } while (!respects_min_distance(ue.position, params.d_min, ap_positions));

  const double lo = params.velocity_support == VelocitySupport::Signed ? -params.v_max : 0.0;
  ue.ref_velocity = {rng.uniform(lo, params.v_max), rng.uniform(lo, params.v_max)};
  return ue;
}

UEState step_ue(RandomStream& rng, const UEState& state, const MobilityParams& params,
                std::span<const Point> ap_positions) {
  const double wx = rng.normal(0.0, params.sigma_w);
  const double wy = rng.normal(0.0, params.sigma_w);
  const Point next{state.position.x + (state.ref_velocity.x + wx) * params.sample_time,
                   state.position.y + (state.ref_velocity.y + wy) * params.sample_time};
  if (!inside_box(next, params.area_side)) return init_ue(rng, params, ap_positions);
  if (!respects_min_distance(next, params.d_min, ap_positions)) return state;
  return {next, state.ref_velocity};
}

}  // namespace cfjam::mobility
