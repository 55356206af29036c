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
#include "cfjam/neural.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfjam/error.hpp"

namespace cfjam::neural {

void ModelConfig::validate() const {
  require(hidden_dim >= 1 && gcn_layers >= 1 && gcn_prop_steps >= 1 && encoder_layers >= 1 &&
              attention_heads >= 1 && ffn_dim >= 1 && classifier_hidden >= 1 && n_steps >= 1,
          ErrorCode::Configuration, "neural: all dimensions must be at least 1");
  require(hidden_dim % attention_heads == 0, ErrorCode::Configuration,
          "neural.hidden_dim must be divisible by neural.attention_heads");
  require(dropout_attn >= 0.0 && dropout_attn < 1.0, ErrorCode::Configuration,
          "neural.dropout_attn must lie in [0, 1)");
  require(dropout_global >= 0.0 && dropout_global < 1.0, ErrorCode::Configuration,
          "neural.dropout_global must lie in [0, 1)");
  require(node_feature_dim == kNodeFeatureDim, ErrorCode::Configuration, "neural.node_feature_dim must be 4");
  require(edge_feature_dim == kEdgeFeatureDim, ErrorCode::Configuration, "neural.edge_feature_dim must be 2");
  require(area_side > 0.0, ErrorCode::Configuration, "neural.area_side must be positive");
}

namespace {

template <typename Self, typename Fn>
void visit(Self& self, Fn&& fn) {
  fn(std::string("input.w"), self.in_w);
  fn(std::string("input.b"), self.in_b);
  for (std::size_t l = 0; l < self.gcn.size(); ++l) {
    auto& g = self.gcn[l];
    const std::string p = "gcn." + std::to_string(l) + ".";
    fn(p + "msg", g.msg);
    fn(p + "edge", g.edge);
    fn(p + "gate_m", g.gate_m);
    fn(p + "gate_h", g.gate_h);
    fn(p + "cand_h", g.cand_h);
    fn(p + "gate_b", g.gate_b);
  }
  fn(std::string("positional"), self.pos);
  for (std::size_t l = 0; l < self.encoder.size(); ++l) {
    auto& e = self.encoder[l];
    const std::string p = "encoder." + std::to_string(l) + ".";
    fn(p + "attn.in_w", e.attn.in_w);
    fn(p + "attn.in_b", e.attn.in_b);
    fn(p + "attn.out_w", e.attn.out_w);
    fn(p + "attn.out_b", e.attn.out_b);
    fn(p + "ff1_w", e.ff1_w);
    fn(p + "ff1_b", e.ff1_b);
    fn(p + "ff2_w", e.ff2_w);
    fn(p + "ff2_b", e.ff2_b);
    fn(p + "ln1_g", e.ln1_g);
    fn(p + "ln1_b", e.ln1_b);
    fn(p + "ln2_g", e.ln2_g);
    fn(p + "ln2_b", e.ln2_b);
  }
  fn(std::string("head.w1"), self.head.w1);
  fn(std::string("head.b1"), self.head.b1);
  fn(std::string("head.w2"), self.head.w2);
  fn(std::string("head.b2"), self.head.b2);
  fn(std::string("head.ln_g"), self.head.ln_g);
  fn(std::string("head.ln_b"), self.head.ln_b);
}

/// Xavier-uniform; `blocks` side-by-side sub-matrices are each treated as their own layer.
Mat xavier(Eigen::Index rows, Eigen::Index cols, int blocks, RandomStream& rng) {
  const double fan_out = static_cast<double>(cols) / blocks;
  const double limit = std::sqrt(6.0 / (static_cast<double>(rows) + fan_out));
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
  return m;
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& c) {
  c.validate();
  const int h = c.hidden_dim;
  ModelParams p;
  p.in_w = Mat::Zero(c.node_feature_dim, h);
  p.in_b = Mat::Zero(1, h);
  p.gcn.resize(c.gcn_layers);
  for (auto& g : p.gcn) {
    g.msg = Mat::Zero(h, h);
    g.edge = Mat::Zero(c.edge_feature_dim, h);
    g.gate_m = Mat::Zero(h, 3 * h);
    g.gate_h = Mat::Zero(h, 2 * h);
    g.cand_h = Mat::Zero(h, h);
    g.gate_b = Mat::Zero(1, 3 * h);
  }
  p.pos = Mat::Zero(c.n_steps, h);
  p.encoder.resize(c.encoder_layers);
  for (auto& e : p.encoder) {
    e.attn.in_w = Mat::Zero(h, 3 * h);
    e.attn.in_b = Mat::Zero(1, 3 * h);
    e.attn.out_w = Mat::Zero(h, h);
    e.attn.out_b = Mat::Zero(1, h);
    e.ff1_w = Mat::Zero(h, c.ffn_dim);
    e.ff1_b = Mat::Zero(1, c.ffn_dim);
    e.ff2_w = Mat::Zero(c.ffn_dim, h);
    e.ff2_b = Mat::Zero(1, h);
    e.ln1_g = Mat::Zero(1, h);
    e.ln1_b = Mat::Zero(1, h);
    e.ln2_g = Mat::Zero(1, h);
    e.ln2_b = Mat::Zero(1, h);
  }
  p.head.w1 = Mat::Zero(h, c.classifier_hidden);
  p.head.b1 = Mat::Zero(1, c.classifier_hidden);
  p.head.w2 = Mat::Zero(c.classifier_hidden, 2);
  p.head.b2 = Mat::Zero(1, 2);
  p.head.ln_g = Mat::Zero(1, c.head_norm_width());
  p.head.ln_b = Mat::Zero(1, c.head_norm_width());
  p.head.norm = c.head_norm;
  return p;
}

ModelParams ModelParams::initialized(const ModelConfig& c, RandomStream& rng) {
  ModelParams p = zeros(c);
  const int h = c.hidden_dim;
  p.in_w = xavier(c.node_feature_dim, h, 1, rng);
  for (auto& g : p.gcn) {
    g.msg = xavier(h, h, 1, rng);
    g.edge = xavier(c.edge_feature_dim, h, 1, rng);
    g.gate_m = xavier(h, 3 * h, 3, rng);
    g.gate_h = xavier(h, 2 * h, 2, rng);
    g.cand_h = xavier(h, h, 1, rng);
  }
  for (auto& e : p.encoder) {
    e.attn.in_w = xavier(h, 3 * h, 3, rng);
    e.attn.out_w = xavier(h, h, 1, rng);
    e.ff1_w = xavier(h, c.ffn_dim, 1, rng);
    e.ff2_w = xavier(c.ffn_dim, h, 1, rng);
    e.ln1_g.setOnes();
    e.ln2_g.setOnes();
  }
  p.head.w1 = xavier(h, c.classifier_hidden, 1, rng);
  p.head.w2 = xavier(c.classifier_hidden, 2, 1, rng);
  p.head.ln_g.setOnes();
  return p;
}

void ModelParams::for_each(const std::function<void(const std::string&, Mat&)>& fn) { visit(*this, fn); }

void ModelParams::for_each(const std::function<void(const std::string&, const Mat&)>& fn) const {
  visit(*this, fn);
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&n](const std::string&, const Mat& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

void ModelParams::set_zero() {
  for_each([](const std::string&, Mat& m) { m.setZero(); });
}

void ModelParams::add_scaled(const ModelParams& other, double scale) {
  std::vector<const Mat*> theirs;
  other.for_each([&theirs](const std::string&, const Mat& m) { theirs.push_back(&m); });
  std::size_t i = 0;
  for_each([&](const std::string& name, Mat& m) {
    require(i < theirs.size() && theirs[i]->rows() == m.rows() && theirs[i]->cols() == m.cols(),
            ErrorCode::ShapeMismatch, "parameter sets differ at " + name);
    m += scale * *theirs[i++];
  });
}

const char* head_norm_name(layers::HeadNorm norm) {
  return norm == layers::HeadNorm::Hidden ? "hidden" : "logits";
}

layers::HeadNorm parse_head_norm(const std::string& value, const std::string& key) {
  if (value == "hidden") return layers::HeadNorm::Hidden;
  if (value == "logits") return layers::HeadNorm::Logits;
  fail(ErrorCode::Configuration, key + ": expected 'hidden' or 'logits', got '" + value + "'");
}

std::size_t expected_parameter_count(const ModelConfig& c) {
  const std::size_t h = c.hidden_dim;
  const std::size_t f = c.ffn_dim;
  const std::size_t k = c.classifier_hidden;
  const std::size_t input = c.node_feature_dim * h + h;
  const std::size_t gcn_layer = 7 * h * h + c.edge_feature_dim * h + 3 * h;
  const std::size_t encoder_layer = 4 * h * h + 4 * h + 2 * h * f + f + h + 4 * h;
  const std::size_t head = h * k + k + 2 * k + 2 + 2 * static_cast<std::size_t>(c.head_norm_width());
  return input + c.gcn_layers * gcn_layer + c.n_steps * h + c.encoder_layers * encoder_layer + head;
}

Mat node_features(const topology::GraphSnapshot& snapshot, double area_side) {
  const auto n_aps = static_cast<double>(std::count_if(snapshot.nodes.begin(), snapshot.nodes.end(), [](const auto& n) {
    return n.type == topology::NodeType::AP;
  }));
  Mat f(static_cast<Eigen::Index>(snapshot.nodes.size()), kNodeFeatureDim);
  for (std::size_t i = 0; i < snapshot.nodes.size(); ++i) {
    const auto& n = snapshot.nodes[i];
    f(i, 0) = n_aps > 0 ? n.degree / n_aps : 0.0;
    f(i, 1) = static_cast<double>(static_cast<int>(n.type));
    f(i, 2) = n.position.x / area_side;
    f(i, 3) = n.position.y / area_side;
  }
  return f;
}

namespace {

void append_snapshot(SequenceGraph& out, const topology::GraphSnapshot& snap, double area_side, int t) {
  const int offset = t * out.nodes_per_snapshot;
  out.features.middleRows(offset, out.nodes_per_snapshot) = node_features(snap, area_side);
  for (const auto& e : snap.edges) {
    const int row = out.graph.n_edges();
    out.graph.u.push_back(offset + e.ap_id);
    out.graph.v.push_back(offset + e.ue_id);
    out.graph.edge_features(row, 0) = e.weight_distance;
    out.graph.edge_features(row, 1) = e.weight_sinr;
  }
}

}  // namespace

SequenceGraph build_sequence_graph(const dataset::GraphSequence& sequence, double area_side) {
  require(!sequence.snapshots.empty(), ErrorCode::InvalidArgument, "empty sequence");
  SequenceGraph out;
  out.n_snapshots = sequence.n_steps();
  out.nodes_per_snapshot = static_cast<int>(sequence.snapshots.front().nodes.size());
  std::size_t total_edges = 0;
  for (const auto& s : sequence.snapshots) {
    require(static_cast<int>(s.nodes.size()) == out.nodes_per_snapshot, ErrorCode::ShapeMismatch,
            "snapshots of one sequence must share the node set");
    total_edges += s.edges.size();
  }
  out.graph.n_nodes = out.n_snapshots * out.nodes_per_snapshot;
  out.features = Mat(out.graph.n_nodes, kNodeFeatureDim);
  out.graph.edge_features = Mat(static_cast<Eigen::Index>(total_edges), kEdgeFeatureDim);
  out.graph.u.reserve(total_edges);
  out.graph.v.reserve(total_edges);
  for (int t = 0; t < out.n_snapshots; ++t) append_snapshot(out, sequence.snapshots[t], area_side, t);
  return out;
}

SequenceGraph build_snapshot_graph(const topology::GraphSnapshot& snapshot, double area_side) {
  SequenceGraph out;
  out.n_snapshots = 1;
  out.nodes_per_snapshot = static_cast<int>(snapshot.nodes.size());
  out.graph.n_nodes = out.nodes_per_snapshot;
  out.features = Mat(out.graph.n_nodes, kNodeFeatureDim);
  out.graph.edge_features = Mat(static_cast<Eigen::Index>(snapshot.edges.size()), kEdgeFeatureDim);
  append_snapshot(out, snapshot, area_side, 0);
  return out;
}

Mat snapshot_embeddings(const SequenceGraph& input, const ModelParams& params, const ModelConfig& config,
                        ForwardCache* cache) {
  Mat h = input.features * params.in_w;
  h.rowwise() += params.in_b.row(0);
  if (cache != nullptr) {
    cache->projected = h;
    cache->gcn.assign(params.gcn.size(), {});
  }
  for (std::size_t l = 0; l < params.gcn.size(); ++l) {
    h = layers::gated_graph_conv(h, input.graph, params.gcn[l], config.gcn_prop_steps,
                                 cache != nullptr ? &cache->gcn[l] : nullptr);
  }
  const int n = input.nodes_per_snapshot;
  Mat pooled(input.n_snapshots, h.cols());
  for (int t = 0; t < input.n_snapshots; ++t) {
    pooled.row(t) = h.middleRows(static_cast<Eigen::Index>(t) * n, n).colwise().mean();
  }
  return pooled;
}

Mat snapshot_embedding(const topology::GraphSnapshot& snapshot, const ModelParams& params,
                       const ModelConfig& config) {
  return snapshot_embeddings(build_snapshot_graph(snapshot, config.area_side), params, config, nullptr);
}

Mat temporal_encode(const Mat& embeddings, const ModelParams& params, const ModelConfig& config, bool train,
                    RandomStream& rng, ForwardCache* cache) {
  require(embeddings.rows() == config.n_steps, ErrorCode::ShapeMismatch,
          "temporal encoder expects " + std::to_string(config.n_steps) + " steps, got " +
              std::to_string(embeddings.rows()));
  Mat z = embeddings + params.pos;
  if (cache != nullptr) cache->encoder.assign(params.encoder.size(), {});
  for (std::size_t l = 0; l < params.encoder.size(); ++l) {
    z = layers::encoder_layer(z, params.encoder[l], config.attention_heads, config.dropout_attn, train, rng,
                              cache != nullptr ? &cache->encoder[l] : nullptr);
  }
  return z.colwise().mean();
}

Mat forward(const SequenceGraph& input, const ModelParams& params, const ModelConfig& config, bool train,
            RandomStream& rng, ForwardCache* cache) {
  Mat embeddings = snapshot_embeddings(input, params, config, cache);
  if (train && config.dropout_global > 0.0) {
    Mat mask = layers::dropout_mask(embeddings.rows(), embeddings.cols(), config.dropout_global, rng);
    embeddings = embeddings.cwiseProduct(mask);
    if (cache != nullptr) cache->embed_mask = std::move(mask);
  } else if (cache != nullptr) {
    cache->embed_mask = Mat();
  }
  const Mat t_o = temporal_encode(embeddings, params, config, train, rng, cache);
  return layers::classify(t_o, params.head, cache != nullptr ? &cache->head : nullptr);
}

Mat forward(const dataset::GraphSequence& sequence, const ModelParams& params, const ModelConfig& config,
            bool train, RandomStream& rng, ForwardCache* cache) {
  if (cache != nullptr) {
    cache->input = build_sequence_graph(sequence, config.area_side);
    return forward(cache->input, params, config, train, rng, cache);
  }
  return forward(build_sequence_graph(sequence, config.area_side), params, config, train, rng, nullptr);
}

double cross_entropy(const Mat& probs, int label) {
  require(label == 0 || label == 1, ErrorCode::InvalidArgument, "label must be 0 or 1");
  return -std::log(std::max(probs(0, label), 1e-12));
}

Mat cross_entropy_grad(const Mat& probs, int label) {
  Mat d = Mat::Zero(1, 2);
  if (probs(0, label) > 1e-12) d(0, label) = -1.0 / probs(0, label);
  return d;
}

void backward(const ForwardCache& cache, const ModelParams& params, const ModelConfig& config, const Mat& d_probs,
              ModelParams& grads) {
  const Mat d_to = layers::classify_backward(cache.head, params.head, d_probs, grads.head);

  const auto steps = static_cast<Eigen::Index>(config.n_steps);
  Mat d_z = d_to.replicate(steps, 1) / static_cast<double>(steps);
  for (std::size_t l = params.encoder.size(); l-- > 0;) {
    d_z = layers::encoder_layer_backward(cache.encoder[l], params.encoder[l], config.attention_heads, d_z,
                                         grads.encoder[l]);
  }
  grads.pos += d_z;
  Mat d_embed = cache.embed_mask.size() > 0 ? Mat(d_z.cwiseProduct(cache.embed_mask)) : d_z;

  const int n = cache.input.nodes_per_snapshot;
  Mat d_h(cache.input.graph.n_nodes, d_embed.cols());
  for (int t = 0; t < cache.input.n_snapshots; ++t) {
    d_h.middleRows(static_cast<Eigen::Index>(t) * n, n) = (d_embed.row(t) / static_cast<double>(n)).replicate(n, 1);
  }
  for (std::size_t l = params.gcn.size(); l-- > 0;) {
    d_h = layers::gated_graph_conv_backward(cache.gcn[l], cache.input.graph, params.gcn[l], d_h, grads.gcn[l]);
  }
  grads.in_w.noalias() += cache.input.features.transpose() * d_h;
  grads.in_b += d_h.colwise().sum();
}

double loss_and_gradient(const SequenceGraph& input, int label, const ModelParams& params, const ModelConfig& config,
                         bool train, RandomStream& rng, ModelParams& grads, Mat* probs) {
  ForwardCache cache;
  cache.input = input;
  const Mat p = forward(cache.input, params, config, train, rng, &cache);
  backward(cache, params, config, cross_entropy_grad(p, label), grads);
  if (probs != nullptr) *probs = p;
  return cross_entropy(p, label);
}

}  // namespace cfjam::neural
