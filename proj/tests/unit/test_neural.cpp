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
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfjam/error.hpp"
#include "cfjam/neural.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cfjam;
using namespace cfjam::neural;

namespace {

/// Parameter count from the layer shapes, written out independently of the model code.
std::size_t count_by_hand(int node_f, int edge_f, int h, int gcn_layers, int steps, int enc_layers, int ffn, int c,
                          int norm_width) {
  const std::size_t in = node_f * h + h;
  const std::size_t gcn = h * h + edge_f * h + 3 * h * h + 2 * h * h + h * h + 3 * h;
  const std::size_t attention = 3 * h * h + 3 * h + h * h + h;
  const std::size_t ff = h * ffn + ffn + ffn * h + h;
  const std::size_t enc = attention + ff + 4 * h;
  const std::size_t head = h * c + c + c * 2 + 2 + 2 * norm_width;
  return in + gcn_layers * gcn + steps * h + enc_layers * enc + head;
}

topology::GraphSnapshot toy_snapshot() {
  topology::GraphSnapshot s;
  for (int a = 0; a < 5; ++a) s.nodes.push_back({a, topology::NodeType::AP, {100.0 * a, 50.0}, 0});
  for (int u = 0; u < 5; ++u) s.nodes.push_back({5 + u, topology::NodeType::UE, {1000.0, 1000.0 - u}, 0});
  s.edges.push_back({0, 5, 1200.0, 12.0, 0.85, 0.3});
  s.edges.push_back({2, 7, 900.0, 7.0, 0.64, 0.175});
  s.nodes[0].degree = s.nodes[5].degree = s.nodes[2].degree = s.nodes[7].degree = 1;
  return s;
}

}  // namespace

TEST_CASE("parameter count") {
  ModelConfig cfg;
  CHECK(expected_parameter_count(cfg) == 199522);
  CHECK(count_by_hand(4, 2, 64, 2, 80, 4, 128, 32, 32) == 199522);
  RandomStream rng(1);
  CHECK(ModelParams::initialized(cfg, rng).parameter_count() == 199522);

  cfg.head_norm = layers::HeadNorm::Logits;
  CHECK(expected_parameter_count(cfg) == count_by_hand(4, 2, 64, 2, 80, 4, 128, 32, 2));
  CHECK(ModelParams::zeros(cfg).parameter_count() == expected_parameter_count(cfg));

  ModelConfig small;
  small.hidden_dim = 8;
  small.attention_heads = 2;
  small.ffn_dim = 12;
  small.classifier_hidden = 5;
  small.n_steps = 10;
  small.gcn_layers = 3;
  CHECK(ModelParams::zeros(small).parameter_count() == count_by_hand(4, 2, 8, 3, 10, 4, 12, 5, 5));
}

TEST_CASE("model configuration checks") {
  ModelConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.attention_heads = 5;  // 64 is not divisible by 5
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(parse_head_norm("logits", "k") == layers::HeadNorm::Logits);
  CHECK(std::string(head_norm_name(layers::HeadNorm::Hidden)) == "hidden");
  CHECK_THROWS_AS(parse_head_norm("none", "k"), Error);
}

TEST_CASE("node features") {
  const auto snap = toy_snapshot();
  const Mat f = node_features(snap, 1000.0);
  REQUIRE(f.rows() == 10);
  REQUIRE(f.cols() == 4);
  // UE at (L, L) with one edge among five APs.
  CHECK(f(5, 0) == doctest::Approx(0.2));
  CHECK(f(5, 1) == 1.0);
  CHECK(f(5, 2) == 1.0);
  CHECK(f(5, 3) == 1.0);
  CHECK(f(1, 0) == 0.0);
  CHECK(f(1, 1) == 0.0);
  CHECK(f(1, 2) == doctest::Approx(0.1));
}

TEST_CASE("snapshot embedding ignores node labelling") {
  ModelConfig cfg;
  RandomStream rng(2);
  const auto params = ModelParams::initialized(cfg, rng);
  const auto snap = toy_snapshot();
  // Swap UE 5 and UE 9, relabelling edges accordingly.
  auto swapped = snap;
  std::swap(swapped.nodes[5].position, swapped.nodes[9].position);
  std::swap(swapped.nodes[5].degree, swapped.nodes[9].degree);
  swapped.edges[0].ue_id = 9;
  const Mat a = snapshot_embedding(snap, params, cfg);
  const Mat b = snapshot_embedding(swapped, params, cfg);
  CHECK((a - b).norm() < 1e-12);
  CHECK(a.cols() == 64);

  const auto zero = ModelParams::zeros(cfg);
  CHECK(snapshot_embedding(snap, zero, cfg).norm() == 0.0);
}

TEST_CASE("embeddings stay finite on generated snapshots") {
  ModelConfig cfg;
  RandomStream rng(3);
  const auto params = ModelParams::initialized(cfg, rng);
  auto scenario = testkit::short_scenario(100, 9);
  scenario.channel.beta = 0.0;
  int checked = 0;
  for (int id = 0; id < 10; ++id) {
    const auto seq = dataset::generate_planned(scenario, {id, id % 2 == 1, 6});
    for (const auto& s : seq.snapshots) {
      CHECK(snapshot_embedding(s, params, cfg).allFinite());
      ++checked;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("forward pass") {
  ModelConfig cfg;
  cfg.n_steps = 20;
  RandomStream init(4);
  const auto params = ModelParams::initialized(cfg, init);
  const auto seq = dataset::generate_planned(testkit::short_scenario(20, 5), {0, true, 3});
  RandomStream r1(7);
  RandomStream r2(8);
  const Mat p = forward(seq, params, cfg, false, r1);
  REQUIRE(p.rows() == 1);
  REQUIRE(p.cols() == 2);
  CHECK(std::abs(p.sum() - 1.0) < 1e-12);
  CHECK(forward(seq, params, cfg, false, r2) == p);

  // Ground truth fields are never read.
  auto blind = seq;
  blind.label = 0;
  blind.tau = 0;
  blind.jammer_position.reset();
  for (auto& s : blind.snapshots) s.jammer_active = false;
  CHECK(forward(blind, params, cfg, false, r1) == p);

  auto wrong = testkit::short_scenario(10, 5);
  CHECK_THROWS_AS(forward(dataset::generate_planned(wrong, {0, false, 0}), params, cfg, false, r1), Error);
}

TEST_CASE("temporal encoding with zero positions and constant input") {
  ModelConfig cfg;
  cfg.n_steps = 12;
  RandomStream rng(5);
  const auto params = ModelParams::initialized(cfg, rng);
  Mat row(1, 64);
  for (int i = 0; i < 64; ++i) row(0, i) = std::sin(i);
  ForwardCache cache;
  const Mat t = temporal_encode(row.replicate(12, 1), params, cfg, false, rng, &cache);
  CHECK(t.rows() == 1);
  CHECK(t.allFinite());
  CHECK_THROWS_AS(temporal_encode(row.replicate(11, 1), params, cfg, false, rng, nullptr), Error);
}

TEST_CASE("cross entropy") {
  Mat even(1, 2);
  even << 0.5, 0.5;
  CHECK(cross_entropy(even, 0) == doctest::Approx(std::log(2.0)));
  CHECK(cross_entropy(even, 1) == doctest::Approx(std::log(2.0)));
  Mat sure(1, 2);
  sure << 0.0, 1.0;
  CHECK(cross_entropy(sure, 0) == doctest::Approx(-std::log(1e-12)));
  CHECK(cross_entropy(sure, 1) == 0.0);
  const Mat g = cross_entropy_grad(even, 1);
  CHECK(g(0, 0) == 0.0);
  CHECK(g(0, 1) == doctest::Approx(-2.0));
}
