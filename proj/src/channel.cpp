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
#include "cfjam/channel.hpp"

#include <cmath>
#include <string>

#include "cfjam/error.hpp"

namespace cfjam::channel {

void ChannelParams::validate() const {
  require(beta >= 0.0 && beta <= 1.0, ErrorCode::Configuration, "channel.beta must lie in [0, 1]");
  require(d0 > 0.0, ErrorCode::Configuration, "channel.d0 must be positive");
  require(noise_power > 0.0, ErrorCode::Configuration, "channel.noise_power must be positive");
  require(n_antennas >= 1, ErrorCode::Configuration, "channel.n_antennas must be at least 1");
  require(jammer_power >= 0.0, ErrorCode::Configuration, "channel.jammer_power must be non-negative");
  require(jammer_radius >= 0.0, ErrorCode::Configuration, "channel.jammer_radius must be non-negative");
}

ChannelVector::ChannelVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    require(std::isfinite(e.real()) && std::isfinite(e.imag()), ErrorCode::InvalidArgument,
            "channel vector entries must be finite");
  }
}

double ChannelVector::squared_norm() const noexcept {
  double acc = 0.0;
  for (const auto& e : entries_) acc += std::norm(e);
  return acc;
}

Complex ChannelVector::inner(const ChannelVector& other) const {
  require(other.size() == size(), ErrorCode::ShapeMismatch, "channel vectors differ in length");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < entries_.size(); ++i) acc += std::conj(entries_[i]) * other.entries_[i];
  return acc;
}

double path_loss_variance(double distance, double d0) {
  require(distance > 0.0, ErrorCode::InvalidGeometry,
          "path loss requested at non-positive distance " + std::to_string(distance));
  return (d0 * d0) / (distance * distance);
}

ChannelVector draw_channel(RandomStream& rng, const ChannelParams& params, double distance) {
  const double variance = path_loss_variance(distance, params.d0);
  const double sigma = std::sqrt(variance);
  const auto n = static_cast<std::size_t>(params.n_antennas);
  const double los = params.beta * sigma / std::sqrt(static_cast<double>(n));
  const double scatter_weight = std::sqrt(1.0 - params.beta * params.beta);
  const double part_std = std::sqrt(variance / 2.0);

  std::vector<Complex> entries(n, Complex{los, 0.0});
  if (scatter_weight > 0.0) {
    for (auto& e : entries) {
      const double re = rng.normal(0.0, part_std);
      const double im = rng.normal(0.0, part_std);
      e += scatter_weight * Complex{re, im};
    }
  }
  return ChannelVector(std::move(entries));
}

namespace {

double interference(const ChannelVector& serving, std::span<const ChannelVector> interferers) {
  double acc = 0.0;
  for (const auto& other : interferers) {
    require(other.size() == serving.size(), ErrorCode::ShapeMismatch,
            "interferer channel length " + std::to_string(other.size()) + " != serving length " +
                std::to_string(serving.size()));
    acc += std::norm(serving.inner(other));
  }
  return acc;
}

}  // namespace

double sinr(const ChannelVector& serving, std::span<const ChannelVector> interferers, double noise_power) {
  return sinr_jammed(serving, interferers, noise_power, 0.0);
}

double sinr_jammed(const ChannelVector& serving, std::span<const ChannelVector> interferers, double noise_power,
                   double jammer_received) {
  require(noise_power > 0.0, ErrorCode::InvalidArgument, "noise power must be positive");
  require(jammer_received >= 0.0, ErrorCode::InvalidArgument, "jammer power must be non-negative");
  const double gain = serving.squared_norm();
  return gain * gain / (noise_power + jammer_received + interference(serving, interferers));
}

double jammer_received_power(RandomStream& rng, const ChannelParams& params, double distance_to_ue) {
  require(distance_to_ue > 0.0, ErrorCode::InvalidGeometry, "jammer at zero distance from UE");
  if (distance_to_ue > params.jammer_radius) return 0.0;
  ChannelParams scalar = params;
  scalar.n_antennas = 1;
  const ChannelVector s = draw_channel(rng, scalar, distance_to_ue);
  return params.jammer_power * s.squared_norm();
}

}  // namespace cfjam::channel
