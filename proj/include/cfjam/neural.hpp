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
#include <functional>
#include <string>
#include <vector>

#include "cfjam/dataset.hpp"
#include "cfjam/layers.hpp"
#include "cfjam/random.hpp"
#include "cfjam/tensor.hpp"
#include "cfjam/topology.hpp"

namespace cfjam::neural {

inline constexpr int kNodeFeatureDim = 4;  // [degree / n_aps, type, x / L, y / L]
inline constexpr int kEdgeFeatureDim = 2;  // [alpha d, zeta(sinr)]
inline constexpr int kClassJammed = 1;

const char* head_norm_name(layers::HeadNorm norm);
/// "hidden" or "logits"; throws Configuration naming `key` otherwise.
layers::HeadNorm parse_head_norm(const std::string& value, const std::string& key);

struct ModelConfig {
  int hidden_dim = 64;
  int gcn_layers = 2;
  int gcn_prop_steps = 2;
  int encoder_layers = 4;
  int attention_heads = 16;
  int ffn_dim = 128;
  int classifier_hidden = 32;
  double dropout_attn = 0.03;
  double dropout_global = 0.05;
  int n_steps = 80;
  int node_feature_dim = kNodeFeatureDim;
  int edge_feature_dim = kEdgeFeatureDim;
  double area_side = 1000.0;  // position normalisation for node features
  layers::HeadNorm head_norm = layers::HeadNorm::Hidden;

  /// Width of the head's layer normalization.
  int head_norm_width() const { return head_norm == layers::HeadNorm::Hidden ? classifier_hidden : 2; }

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Every learnable tensor of the GCN -> transformer -> classifier stack.
struct ModelParams {
  Mat in_w;  // node features -> hidden
  Mat in_b;
  std::vector<layers::GcnLayerParams> gcn;
  Mat pos;   // n_steps x hidden, learned positional embedding
  std::vector<layers::EncoderLayerParams> encoder;
  layers::ClassifierParams head;

  /// Shapes from `config`, all entries zero.
  static ModelParams zeros(const ModelConfig& config);
  /// Xavier-uniform matrices, zero biases and positions, unit layer-norm gains.
  static ModelParams initialized(const ModelConfig& config, RandomStream& rng);

  /// Visits every tensor as (name, matrix) in a fixed order.
  void for_each(const std::function<void(const std::string&, Mat&)>& fn);
  void for_each(const std::function<void(const std::string&, const Mat&)>& fn) const;

  std::size_t parameter_count() const;
  void set_zero();
  /// this += scale * other
  void add_scaled(const ModelParams& other, double scale);
};

/// Closed form of parameter_count() for a given configuration.
std::size_t expected_parameter_count(const ModelConfig& config);

/// Node feature rows for one snapshot: [degree / n_aps, node_type, x / L, y / L].
Mat node_features(const topology::GraphSnapshot& snapshot, double area_side);

/// Node features and (undirected) edges of every snapshot, stacked with per-snapshot node offsets.
struct SequenceGraph {
  Mat features;
  layers::Graph graph;
  int n_snapshots = 0;
  int nodes_per_snapshot = 0;
};
SequenceGraph build_sequence_graph(const dataset::GraphSequence& sequence, double area_side);
SequenceGraph build_snapshot_graph(const topology::GraphSnapshot& snapshot, double area_side);

/// Activations kept for the backward pass.
struct ForwardCache {
  SequenceGraph input;
  Mat projected;
  std::vector<layers::GcnLayerCache> gcn;
  Mat embed_mask;
  std::vector<layers::EncoderLayerCache> encoder;
  layers::ClassifierCache head;
};

/// Input projection, gated graph convolutions and mean-pooling, one row per snapshot.
Mat snapshot_embeddings(const SequenceGraph& input, const ModelParams& params, const ModelConfig& config,
                        ForwardCache* cache);
/// Single-snapshot convenience wrapper (1 x hidden).
Mat snapshot_embedding(const topology::GraphSnapshot& snapshot, const ModelParams& params,
                       const ModelConfig& config);

/// Adds positions, runs the encoder stack and mean-pools over time (1 x hidden).
Mat temporal_encode(const Mat& embeddings, const ModelParams& params, const ModelConfig& config, bool train,
                    RandomStream& rng, ForwardCache* cache);

/// (p_clean, p_jammed). Reads only snapshot topology and features, never labels or jammer fields.
Mat forward(const dataset::GraphSequence& sequence, const ModelParams& params, const ModelConfig& config,
            bool train, RandomStream& rng, ForwardCache* cache = nullptr);
Mat forward(const SequenceGraph& input, const ModelParams& params, const ModelConfig& config, bool train,
            RandomStream& rng, ForwardCache* cache = nullptr);

/// -log max(p[label], 1e-12)
double cross_entropy(const Mat& probs, int label);
/// dL/dp for cross_entropy.
Mat cross_entropy_grad(const Mat& probs, int label);

/// Backpropagates dL/dp through the cached forward pass, accumulating into `grads`.
void backward(const ForwardCache& cache, const ModelParams& params, const ModelConfig& config, const Mat& d_probs,
              ModelParams& grads);

/// Forward + loss + backward for one labelled sequence; returns the loss and fills probs.
double loss_and_gradient(const SequenceGraph& input, int label, const ModelParams& params, const ModelConfig& config,
                         bool train, RandomStream& rng, ModelParams& grads, Mat* probs = nullptr);

// Checkpoints (schema "cfjam-ckpt-v1").
inline constexpr const char* kCheckpointSchema = "cfjam-ckpt-v1";

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  std::string dataset_digest;
  double decision_threshold = 0.5;
};
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
/// Rejects missing tensors, unknown names and shape mismatches against the stored config.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace cfjam::neural
