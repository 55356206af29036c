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

#include <optional>
#include <span>
#include <vector>

#include "cfjam/channel.hpp"
#include "cfjam/geometry.hpp"

namespace cfjam::topology {

enum class NodeType : int { AP = 0, UE = 1 };

struct NodeRecord {
  int id = 0;
  NodeType type = NodeType::AP;
  Point position;
  int degree = 0;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct EdgeRecord {
  int ap_id = 0;  // node id of the AP
  int ue_id = 0;  // node id of the UE
  double distance = 0.0;
  double sinr_db = 0.0;
  double weight_distance = 0.0;  // alpha * d
  double weight_sinr = 0.0;      // zeta(sinr_db)

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct GraphSnapshot {
  int time_index = 0;
  std::vector<NodeRecord> nodes;  // APs first, then UEs
  std::vector<EdgeRecord> edges;
  bool jammer_active = false;     // ground truth only; never read by the detector

  friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;
};

struct AssignmentPair {
  int ap = 0;  // index into the AP list
  int ue = 0;  // index into the UE list

  friend bool operator==(const AssignmentPair&, const AssignmentPair&) = default;
};

using AssignmentMap = std::vector<AssignmentPair>;

/// Scales edge attributes into [0, 1].
struct NormalizationConstants {
  double area_side = 1000.0;
  double sinr_db_ceiling = 40.0;

  /// alpha = 1 / (L sqrt 2): distance over the box diagonal.
  double alpha() const;
  double scale_distance(double d) const;
  /// clamp(sinr_db, 0, ceiling) / ceiling
  double scale_sinr_db(double sinr_db) const;
};

/// Device positions and jammer state at one time step.
struct NetworkState {
  int time_index = 0;
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  AssignmentMap assignment;
  bool jammer_active = false;
  std::optional<Point> jammer_position;
};

/// All random link quantities for one time step: channels[ue][ap] and the jamming power received by
/// each UE while the jammer is on (zero outside its radius).
struct LinkRealization {
  std::vector<std::vector<channel::ChannelVector>> channels;
  std::vector<double> jammer_received;
};

/// Greedy matching: repeatedly take the closest unassigned (AP, UE) pair. Ties go to the
/// lexicographically smallest (ap, ue). Returns pairs in selection order.
AssignmentMap assign_users(std::span<const Point> ap_positions, std::span<const Point> ue_positions);

/// Linear SINR of the assigned link (ap, ue); jamming applies when the state says it is active.
double link_sinr(const NetworkState& state, const LinkRealization& links, const AssignmentPair& pair,
                 double noise_power);

/// Node/edge construction with connection thresholding: an edge exists iff 10 log10(SINR) > threshold_db.
GraphSnapshot build_snapshot(const NetworkState& state, const LinkRealization& links, double noise_power,
                             double threshold_db, const NormalizationConstants& norm);

/// Incident-edge count; throws NotFound for ids outside the snapshot.
int degree_of(const GraphSnapshot& snapshot, int node_id);

inline int ue_node_id(int n_aps, int ue_index) { return n_aps + ue_index; }

}  // namespace cfjam::topology
