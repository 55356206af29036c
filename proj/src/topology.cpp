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
#include "cfjam/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "cfjam/error.hpp"

namespace cfjam::topology {

double NormalizationConstants::alpha() const { return 1.0 / (area_side * std::sqrt(2.0)); }

double NormalizationConstants::scale_distance(double d) const { return alpha() * d; }

double NormalizationConstants::scale_sinr_db(double sinr_db) const {
  return std::clamp(sinr_db, 0.0, sinr_db_ceiling) / sinr_db_ceiling;
}

AssignmentMap assign_users(std::span<const Point> ap_positions, std::span<const Point> ue_positions) {
  struct Candidate {
    double d;
    int ap;
    int ue;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(ap_positions.size() * ue_positions.size());
  for (int a = 0; a < static_cast<int>(ap_positions.size()); ++a) {
    for (int u = 0; u < static_cast<int>(ue_positions.size()); ++u) {
      candidates.push_back({distance(ap_positions[a], ue_positions[u]), a, u});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
    return std::tie(l.d, l.ap, l.ue) < std::tie(r.d, r.ap, r.ue);
  });

  std::vector<bool> ap_used(ap_positions.size(), false);
  std::vector<bool> ue_used(ue_positions.size(), false);
  const std::size_t target = std::min(ap_positions.size(), ue_positions.size());
  AssignmentMap pairs;
  pairs.reserve(target);
  for (const auto& c : candidates) {
    if (pairs.size() == target) break;
    if (ap_used[c.ap] || ue_used[c.ue]) continue;
    ap_used[c.ap] = true;
    ue_used[c.ue] = true;
    pairs.push_back({c.ap, c.ue});
  }
  return pairs;
}

double link_sinr(const NetworkState& state, const LinkRealization& links, const AssignmentPair& pair,
                 double noise_power) {
  const auto& row = links.channels.at(pair.ue);
  const auto& serving = row.at(pair.ap);
  // Only APs that serve someone transmit.
  std::vector<channel::ChannelVector> interferers;
  interferers.reserve(state.assignment.size());
  for (const auto& other : state.assignment) {
    if (other.ap != pair.ap) interferers.push_back(row.at(other.ap));
  }
  const double jam = state.jammer_active ? links.jammer_received.at(pair.ue) : 0.0;
  return channel::sinr_jammed(serving, interferers, noise_power, jam);
}

GraphSnapshot build_snapshot(const NetworkState& state, const LinkRealization& links, double noise_power,
                             double threshold_db, const NormalizationConstants& norm) {
  const int n_aps = static_cast<int>(state.ap_positions.size());
  const int n_ues = static_cast<int>(state.ue_positions.size());
  require(static_cast<int>(links.channels.size()) == n_ues, ErrorCode::ShapeMismatch,
          "link realization does not cover every UE");
  require(static_cast<int>(links.jammer_received.size()) == n_ues, ErrorCode::ShapeMismatch,
          "jammer powers do not cover every UE");

  GraphSnapshot snap;
  snap.time_index = state.time_index;
  snap.jammer_active = state.jammer_active;
  snap.nodes.reserve(n_aps + n_ues);
  for (int a = 0; a < n_aps; ++a) snap.nodes.push_back({a, NodeType::AP, state.ap_positions[a], 0});
  for (int u = 0; u < n_ues; ++u) {
    snap.nodes.push_back({ue_node_id(n_aps, u), NodeType::UE, state.ue_positions[u], 0});
  }

  for (const auto& pair : state.assignment) {
    const double gamma = link_sinr(state, links, pair, noise_power);
    const double gamma_db = channel::to_db(gamma);
    if (!(gamma_db > threshold_db)) continue;
    EdgeRecord e;
    e.ap_id = pair.ap;
    e.ue_id = ue_node_id(n_aps, pair.ue);
    e.distance = distance(state.ap_positions[pair.ap], state.ue_positions[pair.ue]);
    e.sinr_db = gamma_db;
    e.weight_distance = norm.scale_distance(e.distance);
    e.weight_sinr = norm.scale_sinr_db(gamma_db);
    snap.nodes[e.ap_id].degree += 1;
    snap.nodes[e.ue_id].degree += 1;
    snap.edges.push_back(e);
  }
  return snap;
}

int degree_of(const GraphSnapshot& snapshot, int node_id) {
  const bool known = std::any_of(snapshot.nodes.begin(), snapshot.nodes.end(),
                                 [&](const NodeRecord& n) { return n.id == node_id; });
  if (!known) fail(ErrorCode::NotFound, "node id " + std::to_string(node_id) + " not in snapshot");
  return static_cast<int>(std::count_if(snapshot.edges.begin(), snapshot.edges.end(), [&](const EdgeRecord& e) {
    return e.ap_id == node_id || e.ue_id == node_id;
  }));
}

}  // namespace cfjam::topology
