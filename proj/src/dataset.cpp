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
#include "cfjam/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "cfjam/error.hpp"
#include "cfjam/parallel.hpp"
#include "cfjam/text.hpp"

namespace cfjam::dataset {

using text::format_double;

int ScenarioConfig::steps_per_frame() const {
  const double ratio = frame_duration / mobility.sample_time;
  const long rounded = std::lround(ratio);
  require(rounded >= 1 && std::abs(ratio - static_cast<double>(rounded)) < 1e-9, ErrorCode::Configuration,
          "dataset.frame_duration must be a positive integer multiple of mobility.sample_time");
  return static_cast<int>(rounded);
}

topology::NormalizationConstants ScenarioConfig::normalization() const {
  topology::NormalizationConstants norm;
  norm.area_side = area_side();
  return norm;
}

void ScenarioConfig::validate() const {
  channel.validate();
  mobility.validate();
  require(n_ues >= 1, ErrorCode::Configuration, "dataset.n_ues must be at least 1");
  require(!ap_positions.empty(), ErrorCode::Configuration, "topology.ap_positions must list at least one AP");
  for (const auto& ap : ap_positions) {
    require(inside_box(ap, area_side()), ErrorCode::Configuration,
            "topology.ap_positions: (" + format_double(ap.x) + ", " + format_double(ap.y) + ") lies outside the area");
  }
  require(n_steps >= 1, ErrorCode::Configuration, "dataset.n_steps must be at least 1");
  const int spf = steps_per_frame();
  require(n_steps % spf == 0, ErrorCode::Configuration,
          "dataset.n_steps must be divisible by the steps per frame (" + std::to_string(spf) + ")");
  require(tau >= 0 && tau <= spf, ErrorCode::Configuration,
          "dataset.tau must lie in [0, " + std::to_string(spf) + "]");
}

std::string ScenarioConfig::canonical() const {
  std::ostringstream os;
  os << "n_ues=" << n_ues << ";aps=";
  for (const auto& ap : ap_positions) os << format_double(ap.x) << ',' << format_double(ap.y) << ';';
  os << "beta=" << format_double(channel.beta) << ";d0=" << format_double(channel.d0)
     << ";noise=" << format_double(channel.noise_power) << ";n_antennas=" << channel.n_antennas
     << ";jammer_power=" << format_double(channel.jammer_power)
     << ";jammer_radius=" << format_double(channel.jammer_radius) << ";L=" << format_double(mobility.area_side)
     << ";v_max=" << format_double(mobility.v_max) << ";sigma_w=" << format_double(mobility.sigma_w)
     << ";T=" << format_double(mobility.sample_time) << ";d_min=" << format_double(mobility.d_min)
     << ";velocity=" << (mobility.velocity_support == mobility::VelocitySupport::Signed ? "signed" : "positive")
     << ";threshold_db=" << format_double(threshold_db) << ";T_F=" << format_double(frame_duration)
     << ";n_steps=" << n_steps << ";burst=" << (burst_offset == BurstOffset::Fixed ? "fixed" : "uniform-random");
  return os.str();
}

std::string ScenarioConfig::digest() const { return text::hex64(text::fnv1a64(canonical())); }

std::string ScenarioConfig::scenario_tag() const {
  if (channel.beta == 1.0) return "deterministic";
  if (channel.beta == 0.0) return "fading";
  return "beta=" + format_double(channel.beta);
}

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "validation") return Split::Validation;
  if (s == "test") return Split::Test;
  throw SchemaError("split", "unknown split '" + s + "'");
}

std::vector<int> DatasetManifest::ids(Split split) const {
  std::vector<int> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back(e.id);
  }
  return out;
}

std::vector<ManifestEntry> DatasetManifest::entries_in(Split split) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [split](const ManifestEntry& e) { return e.split == split; });
  return out;
}

std::vector<bool> jammer_schedule(int n_steps, int steps_per_frame, int tau) {
  require(steps_per_frame >= 1, ErrorCode::InvalidArgument, "steps_per_frame must be positive");
  require(tau >= 0 && tau <= steps_per_frame, ErrorCode::InvalidArgument,
          "tau=" + std::to_string(tau) + " outside [0, " + std::to_string(steps_per_frame) + "]");
  require(n_steps >= 0 && n_steps % steps_per_frame == 0, ErrorCode::InvalidArgument,
          "n_steps must be a multiple of steps_per_frame");
  std::vector<bool> active(n_steps, false);
  for (int n = 0; n < n_steps; ++n) active[n] = (n % steps_per_frame) < tau;
  return active;
}

std::vector<bool> jammer_schedule(int n_steps, int steps_per_frame, int tau, RandomStream& rng) {
  std::vector<bool> active = jammer_schedule(n_steps, steps_per_frame, tau);
  std::fill(active.begin(), active.end(), false);
  const int slack = steps_per_frame - tau;
  for (int frame = 0; frame < n_steps / steps_per_frame; ++frame) {
    const int offset = slack == 0 ? 0 : static_cast<int>(rng.next() % static_cast<std::uint64_t>(slack + 1));
    for (int i = 0; i < tau; ++i) active[frame * steps_per_frame + offset + i] = true;
  }
  return active;
}

GraphSequence generate_sequence(const ScenarioConfig& config, bool jammed, RandomStream& rng) {
  config.validate();
  const std::uint64_t base = rng.next();
  RandomStream mobility_rng(derive_seed(base, 0));
  RandomStream channel_rng(derive_seed(base, 1));
  RandomStream jammer_rng(derive_seed(base, 2));

  const double side = config.area_side();
  const int spf = config.steps_per_frame();

  GraphSequence seq;
  seq.config_digest = config.digest();
  seq.tau = jammed ? config.tau : 0;
  std::vector<bool> schedule(config.n_steps, false);
  if (jammed) {
    seq.jammer_position = Point{jammer_rng.uniform(0.0, side), jammer_rng.uniform(0.0, side)};
    schedule = config.burst_offset == BurstOffset::Fixed
                   ? jammer_schedule(config.n_steps, spf, config.tau)
                   : jammer_schedule(config.n_steps, spf, config.tau, jammer_rng);
  }

  const std::span<const Point> aps(config.ap_positions);
  std::vector<mobility::UEState> ues;
  ues.reserve(config.n_ues);
  for (int k = 0; k < config.n_ues; ++k) ues.push_back(mobility::init_ue(mobility_rng, config.mobility, aps));

  const auto norm = config.normalization();
  topology::NetworkState state;
  state.ap_positions = config.ap_positions;
  state.jammer_position = seq.jammer_position;

  seq.snapshots.reserve(config.n_steps);
  for (int n = 0; n < config.n_steps; ++n) {
    if (n > 0) {
      for (auto& ue : ues) ue = mobility::step_ue(mobility_rng, ue, config.mobility, aps);
    }
    state.time_index = n;
    state.ue_positions.clear();
    for (const auto& ue : ues) state.ue_positions.push_back(ue.position);
    state.assignment = topology::assign_users(state.ap_positions, state.ue_positions);
    state.jammer_active = schedule[n];

    topology::LinkRealization links;
    links.channels.resize(config.n_ues);
    links.jammer_received.assign(config.n_ues, 0.0);
    for (int k = 0; k < config.n_ues; ++k) {
      links.channels[k].reserve(config.n_aps());
      for (int m = 0; m < config.n_aps(); ++m) {
        const double d = distance(state.ue_positions[k], state.ap_positions[m]);
        links.channels[k].push_back(channel::draw_channel(channel_rng, config.channel, d));
      }
      if (jammed) {
        // Drawn every step so the stream does not depend on the schedule.
        const double dj = distance(*seq.jammer_position, state.ue_positions[k]);
        links.jammer_received[k] = channel::jammer_received_power(jammer_rng, config.channel, dj);
      }
    }
    seq.snapshots.push_back(
        topology::build_snapshot(state, links, config.channel.noise_power, config.threshold_db, norm));
  }
  seq.label = std::any_of(schedule.begin(), schedule.end(), [](bool b) { return b; }) ? 1 : 0;
  return seq;
}

std::vector<SequencePlan> plan_dataset(int n_sequences, const std::vector<int>& tau_set, std::uint64_t seed) {
  require(n_sequences >= 10, ErrorCode::InvalidArgument, "a dataset needs at least 10 sequences");
  require(!tau_set.empty(), ErrorCode::InvalidArgument, "tau_set must not be empty");
  const int n_jammed = n_sequences / 2;
  std::vector<SequencePlan> plans;
  plans.reserve(n_sequences);
  for (int j = 0; j < n_jammed; ++j) plans.push_back({0, true, tau_set[j % tau_set.size()]});
  for (int c = n_jammed; c < n_sequences; ++c) plans.push_back({0, false, 0});
  RandomStream rng(derive_seed(seed, 0xA11D5ULL));
  std::shuffle(plans.begin(), plans.end(), rng.engine());
  for (int i = 0; i < n_sequences; ++i) plans[i].id = i;
  return plans;
}

std::vector<Split> stratified_split(const std::vector<SequencePlan>& plans, std::uint64_t seed) {
  constexpr std::array<int, 3> kTenths = {7, 1, 2};
  const int total = static_cast<int>(plans.size());

  // Largest-remainder global targets.
  std::array<int, 3> target{};
  std::array<int, 3> remainder{};
  int assigned = 0;
  for (int j = 0; j < 3; ++j) {
    target[j] = total * kTenths[j] / 10;
    remainder[j] = total * kTenths[j] % 10;
    assigned += target[j];
  }
  for (int left = total - assigned; left > 0; --left) {
    int best = 0;
    for (int j = 1; j < 3; ++j) {
      if (remainder[j] > remainder[best]) best = j;
    }
    ++target[best];
    remainder[best] = -1;
  }

  std::map<std::pair<bool, int>, std::vector<int>> strata;
  for (int i = 0; i < total; ++i) strata[{plans[i].jammed, plans[i].tau}].push_back(i);

  struct Quota {
    std::vector<int> members;
    std::array<int, 3> count{};
    std::array<int, 3> frac{};
    int extra = 0;
  };
  std::vector<Quota> quotas;
  std::array<int, 3> need = target;
  for (auto& [key, members] : strata) {
    Quota q;
    q.members = members;
    const int n = static_cast<int>(members.size());
    int sum = 0;
    for (int j = 0; j < 3; ++j) {
      q.count[j] = n * kTenths[j] / 10;
      q.frac[j] = n * kTenths[j] % 10;
      sum += q.count[j];
      need[j] -= q.count[j];
    }
    q.extra = n - sum;
    quotas.push_back(std::move(q));
  }

  // Hand out the leftover units: each stratum gives at most one extra member per split, preferring
  // the splits that still fall short of their global target.
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return quotas[a].extra > quotas[b].extra; });
  for (std::size_t idx : order) {
    Quota& q = quotas[idx];
    std::array<bool, 3> used{};
    for (int unit = 0; unit < q.extra; ++unit) {
      int best = -1;
      for (int j = 0; j < 3; ++j) {
        if (used[j]) continue;
        if (best < 0 || need[j] > need[best] || (need[j] == need[best] && q.frac[j] > q.frac[best])) best = j;
      }
      used[best] = true;
      ++q.count[best];
      --need[best];
    }
  }

  std::vector<Split> splits(total, Split::Train);
  RandomStream rng(derive_seed(seed, 0x5A17ULL));
  for (auto& q : quotas) {
    std::shuffle(q.members.begin(), q.members.end(), rng.engine());
    std::size_t pos = 0;
    for (int j = 0; j < 3; ++j) {
      for (int c = 0; c < q.count[j]; ++c) splits[q.members[pos++]] = static_cast<Split>(j);
    }
  }
  return splits;
}

GraphSequence generate_planned(const ScenarioConfig& config, const SequencePlan& plan) {
  ScenarioConfig cfg = config;
  if (plan.jammed) cfg.tau = plan.tau;
  RandomStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(plan.id)));
  GraphSequence seq = generate_sequence(cfg, plan.jammed, rng);
  seq.id = plan.id;
  seq.config_digest = config.digest();
  return seq;
}

std::string sequence_file_name(int id) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "seq_%06d", id);
  return buf.data();
}

DatasetManifest generate_dataset(const ScenarioConfig& config, int n_sequences, const std::vector<int>& tau_set,
                                 const std::filesystem::path& dir, int threads, DatasetStats* stats) {
  config.validate();
  const int spf = config.steps_per_frame();
  for (int t : tau_set) {
    require(t >= 0 && t <= spf, ErrorCode::Configuration,
            "dataset.tau_set entry " + std::to_string(t) + " outside [0, " + std::to_string(spf) + "]");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec && std::filesystem::is_directory(dir), ErrorCode::Io,
          "cannot create dataset directory '" + dir.string() + "'");

  const auto plans = plan_dataset(n_sequences, tau_set, config.seed);
  const auto splits = stratified_split(plans, config.seed);

  std::vector<long> edge_counts(plans.size(), 0);
  parallel_for(plans.size(), threads, [&](std::size_t i) {
    const GraphSequence seq = generate_planned(config, plans[i]);
    long edges = 0;
    for (const auto& s : seq.snapshots) edges += static_cast<long>(s.edges.size());
    edge_counts[i] = edges;
    save_sequence(seq, dir / sequence_file_name(seq.id));
  });

  DatasetManifest manifest;
  manifest.config_digest = config.digest();
  manifest.n_steps = config.n_steps;
  manifest.tau_set = tau_set;
  const std::string tag = config.scenario_tag();
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& p = plans[i];
    const int label = (p.jammed && p.tau >= 1) ? 1 : 0;
    manifest.entries.push_back({p.id, sequence_file_name(p.id), label, p.jammed ? p.tau : 0, tag, splits[i]});
  }
  save_manifest(manifest, dir / "manifest");

  if (stats != nullptr) {
    *stats = DatasetStats{};
    std::map<int, int> per_tau;
    long edges = 0;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      ++stats->total;
      if (manifest.entries[i].label == 1) {
        ++stats->jammed;
        ++per_tau[plans[i].tau];
      } else {
        ++stats->clean;
      }
      edges += edge_counts[i];
    }
    stats->per_tau.assign(per_tau.begin(), per_tau.end());
    stats->mean_edges_per_snapshot =
        static_cast<double>(edges) / (static_cast<double>(plans.size()) * static_cast<double>(config.n_steps));
  }
  return manifest;
}

std::vector<GraphSequence> load_split(const std::filesystem::path& dir, const DatasetManifest& manifest, Split split,
                                      int threads) {
  const auto entries = manifest.entries_in(split);
  std::vector<GraphSequence> out(entries.size());
  parallel_for(entries.size(), threads, [&](std::size_t i) {
    out[i] = load_sequence(dir / entries[i].file, manifest.n_steps);
    if (out[i].label != entries[i].label) {
      throw SchemaError("label", "sequence " + entries[i].file + " disagrees with the manifest label");
    }
  });
  return out;
}

}  // namespace cfjam::dataset
