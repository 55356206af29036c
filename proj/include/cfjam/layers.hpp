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

#include <vector>

#include "cfjam/random.hpp"
#include "cfjam/tensor.hpp"

// Building blocks of the detector. Each forward fills a cache that the matching backward consumes;
// backward functions accumulate parameter gradients into a same-shaped params struct and return the
// gradient with respect to the layer input.
namespace cfjam::neural::layers {

inline constexpr double kLayerNormEps = 1e-5;

// ---- elementwise and normalization ---------------------------------------------------------

double gelu(double x);
double gelu_grad(double x);

struct LayerNormCache {
  Mat normalized;
  Eigen::VectorXd inv_std;
};
/// Row-wise layer normalization with per-column gain/bias (1 x d each).
Mat layer_norm(const Mat& x, const Mat& gain, const Mat& bias, LayerNormCache* cache);
Mat layer_norm_backward(const LayerNormCache& cache, const Mat& gain, const Mat& d_out, Mat& d_gain, Mat& d_bias);

/// Row-wise softmax.
Mat softmax_rows(const Mat& x);

/// Inverted dropout mask (entries 0 or 1/(1-p)); all ones when p == 0.
Mat dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, RandomStream& rng);

// ---- gated graph convolution ---------------------------------------------------------------

/// Undirected graph over a batch of nodes; each edge is stored once and messages flow both ways.
struct Graph {
  int n_nodes = 0;
  std::vector<int> u;
  std::vector<int> v;
  Mat edge_features;  // n_edges x edge_dim

  int n_edges() const { return static_cast<int>(u.size()); }
};

struct GcnLayerParams {
  Mat msg;     // H x H, applied to the neighbour state
  Mat edge;    // E x H, applied to the edge attributes
  Mat gate_m;  // H x 3H, message contribution to [update | reset | candidate]
  Mat gate_h;  // H x 2H, state contribution to [update | reset]
  Mat cand_h;  // H x H, reset-gated state contribution to the candidate
  Mat gate_b;  // 1 x 3H
};

struct GcnStepCache {
  Mat h_in;
  Mat message;  // rows of the nodes with at least one edge, in GcnLayerCache::active order
  Mat z;
  Mat r;
  Mat c;
  Mat reset_state;
};
struct GcnLayerCache {
  std::vector<int> active;  // nodes with at least one edge, ascending
  std::vector<GcnStepCache> steps;
};

/// `prop_steps` rounds of: message = sum over neighbours of (msg * h_u + edge * w_uv), then a GRU-style
/// update h <- (1 - z) h + z c. Nodes without edges see a zero message.
Mat gated_graph_conv(const Mat& h, const Graph& graph, const GcnLayerParams& p, int prop_steps,
                     GcnLayerCache* cache);
Mat gated_graph_conv_backward(const GcnLayerCache& cache, const Graph& graph, const GcnLayerParams& p,
                              const Mat& d_out, GcnLayerParams& grads);

// ---- multi-head self-attention and encoder layer -------------------------------------------

struct AttentionParams {
  Mat in_w;   // H x 3H  -> [Q | K | V]
  Mat in_b;   // 1 x 3H
  Mat out_w;  // H x H
  Mat out_b;  // 1 x H
};

struct AttentionCache {
  Mat x;
  Mat qkv;
  std::vector<Mat> probs;    // per head, before dropout (rows sum to 1)
  std::vector<Mat> dropped;  // per head, after dropout
  std::vector<Mat> masks;    // per head dropout masks (empty when inactive)
  Mat concat;
};

Mat multi_head_attention(const Mat& x, const AttentionParams& p, int heads, double dropout, bool train,
                         RandomStream& rng, AttentionCache* cache);
Mat multi_head_attention_backward(const AttentionCache& cache, const AttentionParams& p, int heads,
                                  const Mat& d_out, AttentionParams& grads);

struct EncoderLayerParams {
  AttentionParams attn;
  Mat ff1_w;  // H x F
  Mat ff1_b;  // 1 x F
  Mat ff2_w;  // F x H
  Mat ff2_b;  // 1 x H
  Mat ln1_g, ln1_b, ln2_g, ln2_b;  // 1 x H
};

struct EncoderLayerCache {
  AttentionCache attn;
  Mat attn_mask;
  LayerNormCache ln1;
  Mat y1;
  Mat ff_pre;
  Mat ff_act;
  Mat ff_mask;
  LayerNormCache ln2;
};

/// Post-norm transformer encoder layer: LN(x + Drop(MHA(x))), then LN(y + Drop(FFN_gelu(y))).
Mat encoder_layer(const Mat& x, const EncoderLayerParams& p, int heads, double dropout, bool train,
                  RandomStream& rng, EncoderLayerCache* cache);
Mat encoder_layer_backward(const EncoderLayerCache& cache, const EncoderLayerParams& p, int heads,
                           const Mat& d_out, EncoderLayerParams& grads);

// ---- classification head -------------------------------------------------------------------

/// Where the head's layer normalization sits: on the C-wide intermediate layer, or on the logit pair.
enum class HeadNorm { Hidden, Logits };

struct ClassifierParams {
  Mat w1;    // H x C
  Mat b1;    // 1 x C
  Mat w2;    // C x 2
  Mat b2;    // 1 x 2
  Mat ln_g;  // 1 x C (Hidden) or 1 x 2 (Logits)
  Mat ln_b;
  HeadNorm norm = HeadNorm::Hidden;
};

struct ClassifierCache {
  Mat input;
  Mat hidden_pre;
  Mat normed;  // input of the GELU (Hidden) or of the softmax (Logits)
  Mat hidden;
  Mat logits;
  LayerNormCache ln;
  Mat probs;
};

/// Hidden: softmax(gelu(LayerNorm(t W1 + b1)) W2 + b2).
/// Logits: softmax(LayerNorm(gelu(t W1 + b1) W2 + b2)).
Mat classify(const Mat& t_o, const ClassifierParams& p, ClassifierCache* cache);
/// Gradient of the loss with respect to t_o, given dL/d(probabilities).
Mat classify_backward(const ClassifierCache& cache, const ClassifierParams& p, const Mat& d_probs,
                      ClassifierParams& grads);

}  // namespace cfjam::neural::layers
