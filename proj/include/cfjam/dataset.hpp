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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cfjam/channel.hpp"
#include "cfjam/mobility.hpp"
#include "cfjam/random.hpp"
#include "cfjam/topology.hpp"

namespace cfjam::dataset {

inline constexpr const char* kSchemaVersion = "cfjam-seq-v1";

enum class BurstOffset { Fixed, UniformRandom };

/// One simulated scenario. Defaults reproduce the 5-AP / 10-UE, 1 km setup.
struct ScenarioConfig {
  int n_ues = 10;
  std::vector<Point> ap_positions = {{200.0, 200.0}, {800.0, 200.0}, {200.0, 800.0}, {800.0, 800.0}, {500.0, 500.0}};
  channel::ChannelParams channel;
  mobility::MobilityParams mobility;
  double threshold_db = 5.0;
  double frame_duration = 10.0;  // T_F (s)
  int n_steps = 80;
  int tau = 10;                  // active steps per frame for a jammed run
  BurstOffset burst_offset = BurstOffset::Fixed;
  std::uint64_t seed = 1;

  int n_aps() const { return static_cast<int>(ap_positions.size()); }
  int n_nodes() const { return n_aps() + n_ues; }
  double area_side() const { return mobility.area_side; }
  int steps_per_frame() const;
  topology::NormalizationConstants normalization() const;

  void validate() const;
  /// Stable text rendering of every field that influences generated data (seed excluded).
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string digest() const;
  /// "deterministic" for beta=1, "fading" for beta=0, otherwise "beta=<value>".
  std::string scenario_tag() const;
};

struct GraphSequence {
  int id = 0;
  std::vector<topology::GraphSnapshot> snapshots;
  int label = 0;  // 1 = jammed
  int tau = 0;
  std::optional<Point> jammer_position;
  std::string config_digest;

  int n_steps() const { return static_cast<int>(snapshots.size()); }
  friend bool operator==(const GraphSequence&, const GraphSequence&) = default;
};

enum class Split { Train, Validation, Test };
const char* split_name(Split s);
Split parse_split(const std::string& s);

struct ManifestEntry {
  int id = 0;
  std::string file;
  int label = 0;
  int tau = 0;
  std::string scenario;
  Split split = Split::Train;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::string config_digest;
  int n_steps = 0;
  std::vector<int> tau_set;
  std::vector<ManifestEntry> entries;

  std::vector<int> ids(Split split) const;
  std::vector<ManifestEntry> entries_in(Split split) const;
  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Per-step jammer activity: `tau` consecutive active steps at the start of every frame.
std::vector<bool> jammer_schedule(int n_steps, int steps_per_frame, int tau);
/// Same pattern, but each frame's burst starts at a uniform offset in [0, steps_per_frame - tau].
std::vector<bool> jammer_schedule(int n_steps, int steps_per_frame, int tau, RandomStream& rng);

/// Simulates one sequence. Mobility, channel and jammer draws use separate sub-streams of `rng`,
/// so jammed and clean runs from equal seeds share trajectories and fading.
GraphSequence generate_sequence(const ScenarioConfig& config, bool jammed, RandomStream& rng);

struct SequencePlan {
  int id = 0;
  bool jammed = false;
  int tau = 0;
};

/// Half the sequences jammed (|#jammed - #clean| <= 1); jammed ones cycle through tau_set so each
/// value is equally represented. Ids are assigned in a seed-dependent shuffled order.
std::vector<SequencePlan> plan_dataset(int n_sequences, const std::vector<int>& tau_set, std::uint64_t seed);

/// 70/10/20 split stratified by (label, tau). Global sizes follow largest-remainder rounding of the
/// total; every stratum is within one sequence of its own proportional share.
std::vector<Split> stratified_split(const std::vector<SequencePlan>& plans, std::uint64_t seed);

/// Sequence `plan.id` drawn from the stream derive_seed(config.seed, plan.id).
GraphSequence generate_planned(const ScenarioConfig& config, const SequencePlan& plan);

struct DatasetStats {
  int total = 0;
  int clean = 0;
  int jammed = 0;
  std::vector<std::pair<int, int>> per_tau;  // (tau, count) over jammed sequences
  double mean_edges_per_snapshot = 0.0;
};

/// Generates, writes `manifest` and `seq_<id>` files into `dir`, returns the manifest.
DatasetManifest generate_dataset(const ScenarioConfig& config, int n_sequences, const std::vector<int>& tau_set,
                                 const std::filesystem::path& dir, int threads = 1, DatasetStats* stats = nullptr);

std::string sequence_file_name(int id);

// Serialization (see docs/FILE_FORMATS.md).
void save_sequence(const GraphSequence& seq, const std::filesystem::path& path);
GraphSequence load_sequence(const std::filesystem::path& path);
/// Also checks the stored step count against `expected_steps`.
GraphSequence load_sequence(const std::filesystem::path& path, int expected_steps);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Loads the sequences listed for one split of the dataset in `dir`.
std::vector<GraphSequence> load_split(const std::filesystem::path& dir, const DatasetManifest& manifest, Split split,
                                      int threads = 1);

}  // namespace cfjam::dataset
