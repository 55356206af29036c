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

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "cfjam/random.hpp"

namespace cfjam::channel {

using Complex = std::complex<double>;

/// Physical-layer constants. All powers are linear; dB appears only at the thresholding and
/// feature-normalization boundaries in `topology`.
struct ChannelParams {
  double beta = 1.0;            // LOS mixing factor, sqrt(K/(K+1))
  double d0 = 100.0;            // distance (m) at which the channel has unit variance
  double noise_power = 0.001;   // sigma^2 per antenna
  int n_antennas = 4;           // N_A
  double jammer_power = 100.0;  // sigma_J^2
  double jammer_radius = 350.0; // jammer has no effect beyond this distance (m)

  void validate() const;
};

/// Downlink channel between one AP and one UE; one complex entry per AP antenna.
class ChannelVector {
 public:
  ChannelVector() = default;
  explicit ChannelVector(std::vector<Complex> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const Complex> entries() const noexcept { return entries_; }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }

  double squared_norm() const noexcept;
  /// h^H g
  Complex inner(const ChannelVector& other) const;

  friend bool operator==(const ChannelVector&, const ChannelVector&) = default;

 private:
  std::vector<Complex> entries_;
};

/// d0^2 / d^2. Throws InvalidGeometry for distance <= 0.
double path_loss_variance(double distance, double d0);

/// Rician draw beta*sigma*u + sqrt(1-beta^2)*g, with u = ones/sqrt(N_A) and g circularly-symmetric
/// Gaussian of per-entry variance sigma^2. Does not consume randomness when beta == 1.
ChannelVector draw_channel(RandomStream& rng, const ChannelParams& params, double distance);

/// Linear MR-precoded SINR: |h|^4 / (noise + sum_i |h^H h_i|^2).
double sinr(const ChannelVector& serving, std::span<const ChannelVector> interferers, double noise_power);

/// SINR with an additional received jamming power `jammer_received` in the denominator.
double sinr_jammed(const ChannelVector& serving, std::span<const ChannelVector> interferers, double noise_power,
                   double jammer_received);

/// sigma_J^2 |S|^2 with S a scalar Rician draw; zero outside the jammer radius.
double jammer_received_power(RandomStream& rng, const ChannelParams& params, double distance_to_ue);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace cfjam::channel
