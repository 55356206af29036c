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
#include "cfjam/layers.hpp"

#include <cmath>
#include <string>

#include "cfjam/error.hpp"

namespace cfjam::neural::layers {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

Mat add_row(Mat m, const Mat& row) {
  m.rowwise() += row.row(0);
  return m;
}

Mat col_sum(const Mat& m) { return m.colwise().sum(); }

// Both built on the vectorized array exp.
Mat sigmoid(const Mat& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

Mat tanh_of(const Mat& x) { return (1.0 - 2.0 / ((2.0 * x.array()).exp() + 1.0)).matrix(); }

void check_cols(const Mat& m, Eigen::Index cols, const char* what) {
  require(m.cols() == cols, ErrorCode::ShapeMismatch,
          std::string(what) + ": expected " + std::to_string(cols) + " columns, got " + std::to_string(m.cols()));
}

}  // namespace

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_grad(double x) {
  return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) + x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

Mat layer_norm(const Mat& x, const Mat& gain, const Mat& bias, LayerNormCache* cache) {
  check_cols(gain, x.cols(), "layer_norm gain");
  const auto d = static_cast<double>(x.cols());
  Mat normalized(x.rows(), x.cols());
  Eigen::VectorXd inv_std(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).sum() / d;
    const auto centered = (x.row(i).array() - mean).eval();
    const double var = centered.square().sum() / d;
    inv_std(i) = 1.0 / std::sqrt(var + kLayerNormEps);
    normalized.row(i) = centered * inv_std(i);
  }
  Mat out = normalized.array().rowwise() * gain.row(0).array();
  out.rowwise() += bias.row(0);
  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return out;
}

Mat layer_norm_backward(const LayerNormCache& cache, const Mat& gain, const Mat& d_out, Mat& d_gain, Mat& d_bias) {
  d_gain += (d_out.array() * cache.normalized.array()).colwise().sum().matrix();
  d_bias += col_sum(d_out);
  const Mat d_norm = d_out.array().rowwise() * gain.row(0).array();
  const auto d = static_cast<double>(d_out.cols());
  Mat dx(d_out.rows(), d_out.cols());
  for (Eigen::Index i = 0; i < d_out.rows(); ++i) {
    const double mean_d = d_norm.row(i).sum() / d;
    const double mean_dx = d_norm.row(i).dot(cache.normalized.row(i)) / d;
    dx.row(i) = cache.inv_std(i) *
                (d_norm.row(i).array() - mean_d - cache.normalized.row(i).array() * mean_dx).matrix();
  }
  return dx;
}

Mat softmax_rows(const Mat& x) {
  Mat out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mx = x.row(i).maxCoeff();
    out.row(i) = (x.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Mat dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, RandomStream& rng) {
  Mat mask = Mat::Ones(rows, cols);
  if (p <= 0.0) return mask;
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.bernoulli(p) ? 0.0 : keep;
  return mask;
}

// ---- gated graph convolution ---------------------------------------------------------------

namespace {

// Nodes touched by an edge, plus each edge endpoint's position in that list.
struct ActiveSet {
  std::vector<int> nodes;
  std::vector<int> u, v;
};

ActiveSet active_set(const Graph& g) {
  ActiveSet a;
  std::vector<int> slot(static_cast<std::size_t>(g.n_nodes), -1);
  for (int e = 0; e < g.n_edges(); ++e) {
    slot[g.u[e]] = 0;
    slot[g.v[e]] = 0;
  }
  for (int i = 0; i < g.n_nodes; ++i) {
    if (slot[i] == 0) {
      slot[i] = static_cast<int>(a.nodes.size());
      a.nodes.push_back(i);
    }
  }
  a.u.resize(g.u.size());
  a.v.resize(g.v.size());
  for (int e = 0; e < g.n_edges(); ++e) {
    a.u[e] = slot[g.u[e]];
    a.v[e] = slot[g.v[e]];
  }
  return a;
}

// Messages for the active nodes only; every other node receives zero.
Mat aggregate_messages(const Mat& h, const Graph& g, const ActiveSet& act, const GcnLayerParams& p) {
  const Mat hm = h(act.nodes, Eigen::all) * p.msg;
  const Mat ew = g.edge_features * p.edge;
  Mat message = Mat::Zero(static_cast<Eigen::Index>(act.nodes.size()), h.cols());
  for (int e = 0; e < g.n_edges(); ++e) {
    message.row(act.v[e]) += hm.row(act.u[e]) + ew.row(e);
    message.row(act.u[e]) += hm.row(act.v[e]) + ew.row(e);
  }
  return message;
}

}  // namespace

Mat gated_graph_conv(const Mat& h, const Graph& graph, const GcnLayerParams& p, int prop_steps,
                     GcnLayerCache* cache) {
  const Eigen::Index hidden = p.msg.rows();
  check_cols(h, hidden, "gated_graph_conv input");
  require(h.rows() == graph.n_nodes, ErrorCode::ShapeMismatch, "gated_graph_conv: node count mismatch");
  if (graph.n_edges() > 0) check_cols(graph.edge_features, p.edge.rows(), "gated_graph_conv edge features");
  const ActiveSet act = active_set(graph);
  if (cache != nullptr) {
    cache->steps.clear();
    cache->active = act.nodes;
  }

  Mat state = h;
  for (int step = 0; step < prop_steps; ++step) {
    Mat message = aggregate_messages(state, graph, act, p);
    Mat a = p.gate_b.replicate(state.rows(), 1);
    if (!act.nodes.empty()) a(act.nodes, Eigen::all) += message * p.gate_m;
    const Mat b = state * p.gate_h;
    Mat z = sigmoid(a.leftCols(hidden) + b.leftCols(hidden));
    Mat r = sigmoid(a.middleCols(hidden, hidden) + b.rightCols(hidden));
    Mat reset_state = r.cwiseProduct(state);
    Mat c = tanh_of(a.rightCols(hidden) + reset_state * p.cand_h);
    Mat next = state + z.cwiseProduct(c - state);
    if (cache != nullptr) {
      cache->steps.push_back({std::move(state), std::move(message), std::move(z), std::move(r), std::move(c),
                              std::move(reset_state)});
    }
    state = std::move(next);
  }
  return state;
}

Mat gated_graph_conv_backward(const GcnLayerCache& cache, const Graph& graph, const GcnLayerParams& p,
                              const Mat& d_out, GcnLayerParams& grads) {
  const Eigen::Index hidden = p.msg.rows();
  const ActiveSet act = active_set(graph);
  Mat d_state = d_out;
  for (auto it = cache.steps.rbegin(); it != cache.steps.rend(); ++it) {
    const GcnStepCache& s = *it;
    const auto n = s.h_in.rows();

    const Mat dz = d_state.cwiseProduct(s.c - s.h_in);
    const Mat dc = d_state.cwiseProduct(s.z);
    Mat d_h = d_state.cwiseProduct((1.0 - s.z.array()).matrix());

    const Mat dc_pre = dc.array() * (1.0 - s.c.array().square());
    grads.cand_h.noalias() += s.reset_state.transpose() * dc_pre;
    const Mat d_reset = dc_pre * p.cand_h.transpose();
    const Mat dr = d_reset.cwiseProduct(s.h_in);
    d_h += d_reset.cwiseProduct(s.r);

    const Mat dz_pre = dz.array() * s.z.array() * (1.0 - s.z.array());
    const Mat dr_pre = dr.array() * s.r.array() * (1.0 - s.r.array());

    Mat da(n, 3 * hidden);
    da << dz_pre, dr_pre, dc_pre;
    Mat db(n, 2 * hidden);
    db << dz_pre, dr_pre;

    grads.gate_b += col_sum(da);
    grads.gate_h.noalias() += s.h_in.transpose() * db;
    d_h.noalias() += db * p.gate_h.transpose();

    if (graph.n_edges() > 0) {
      const Mat da_act = da(act.nodes, Eigen::all);
      grads.gate_m.noalias() += s.message.transpose() * da_act;
      const Mat d_message = da_act * p.gate_m.transpose();
      const auto k = static_cast<Eigen::Index>(act.nodes.size());
      Mat d_hm = Mat::Zero(k, hidden);
      Mat d_ew(graph.n_edges(), hidden);
      for (int e = 0; e < graph.n_edges(); ++e) {
        d_hm.row(act.u[e]) += d_message.row(act.v[e]);
        d_hm.row(act.v[e]) += d_message.row(act.u[e]);
        d_ew.row(e) = d_message.row(act.v[e]) + d_message.row(act.u[e]);
      }
      grads.edge.noalias() += graph.edge_features.transpose() * d_ew;
      grads.msg.noalias() += s.h_in(act.nodes, Eigen::all).transpose() * d_hm;
      d_h(act.nodes, Eigen::all) += d_hm * p.msg.transpose();
    }
    d_state = std::move(d_h);
  }
  return d_state;
}

// ---- attention -----------------------------------------------------------------------------

Mat multi_head_attention(const Mat& x, const AttentionParams& p, int heads, double dropout, bool train,
                         RandomStream& rng, AttentionCache* cache) {
  const Eigen::Index hidden = p.out_w.rows();
  check_cols(x, hidden, "attention input");
  require(heads >= 1 && hidden % heads == 0, ErrorCode::ShapeMismatch, "hidden size not divisible by head count");
  const Eigen::Index hd = hidden / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  const Eigen::Index len = x.rows();

  Mat qkv = add_row(x * p.in_w, p.in_b);
  Mat concat(len, hidden);
  std::vector<Mat> probs, dropped, masks;
  for (int h = 0; h < heads; ++h) {
    const auto q = qkv.middleCols(h * hd, hd);
    const auto k = qkv.middleCols(hidden + h * hd, hd);
    const auto v = qkv.middleCols(2 * hidden + h * hd, hd);
    Mat scores = (q * k.transpose()) * scale;
    Mat pr = softmax_rows(scores);
    Mat used = pr;
    Mat mask;
    if (train && dropout > 0.0) {
      mask = dropout_mask(len, len, dropout, rng);
      used = pr.cwiseProduct(mask);
    }
    concat.middleCols(h * hd, hd).noalias() = used * v;
    if (cache != nullptr) {
      probs.push_back(std::move(pr));
      dropped.push_back(std::move(used));
      masks.push_back(std::move(mask));
    }
  }
  Mat out = add_row(concat * p.out_w, p.out_b);
  if (cache != nullptr) {
    cache->x = x;
    cache->qkv = std::move(qkv);
    cache->probs = std::move(probs);
    cache->dropped = std::move(dropped);
    cache->masks = std::move(masks);
    cache->concat = std::move(concat);
  }
  return out;
}

Mat multi_head_attention_backward(const AttentionCache& cache, const AttentionParams& p, int heads,
                                  const Mat& d_out, AttentionParams& grads) {
  const Eigen::Index hidden = p.out_w.rows();
  const Eigen::Index hd = hidden / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

  grads.out_w.noalias() += cache.concat.transpose() * d_out;
  grads.out_b += col_sum(d_out);
  const Mat d_concat = d_out * p.out_w.transpose();

  Mat d_qkv(cache.qkv.rows(), cache.qkv.cols());
  for (int h = 0; h < heads; ++h) {
    const auto q = cache.qkv.middleCols(h * hd, hd);
    const auto k = cache.qkv.middleCols(hidden + h * hd, hd);
    const auto v = cache.qkv.middleCols(2 * hidden + h * hd, hd);
    const auto d_head = d_concat.middleCols(h * hd, hd);

    d_qkv.middleCols(2 * hidden + h * hd, hd).noalias() = cache.dropped[h].transpose() * d_head;
    Mat d_probs = d_head * v.transpose();
    if (cache.masks[h].size() > 0) d_probs = d_probs.cwiseProduct(cache.masks[h]);
    const Mat& pr = cache.probs[h];
    const Eigen::VectorXd row_dot = (d_probs.array() * pr.array()).rowwise().sum();
    Mat d_scores = pr.array() * (d_probs.array().colwise() - row_dot.array());
    d_scores *= scale;
    d_qkv.middleCols(h * hd, hd).noalias() = d_scores * k;
    d_qkv.middleCols(hidden + h * hd, hd).noalias() = d_scores.transpose() * q;
  }
  grads.in_w.noalias() += cache.x.transpose() * d_qkv;
  grads.in_b += col_sum(d_qkv);
  return d_qkv * p.in_w.transpose();
}

Mat encoder_layer(const Mat& x, const EncoderLayerParams& p, int heads, double dropout, bool train,
                  RandomStream& rng, EncoderLayerCache* cache) {
  EncoderLayerCache local;
  EncoderLayerCache& c = cache != nullptr ? *cache : local;
  const bool drop = train && dropout > 0.0;

  Mat attn = multi_head_attention(x, p.attn, heads, dropout, train, rng, &c.attn);
  c.attn_mask = drop ? dropout_mask(attn.rows(), attn.cols(), dropout, rng) : Mat();
  if (drop) attn = attn.cwiseProduct(c.attn_mask);
  c.y1 = layer_norm(x + attn, p.ln1_g, p.ln1_b, &c.ln1);

  c.ff_pre = add_row(c.y1 * p.ff1_w, p.ff1_b);
  c.ff_act = c.ff_pre.unaryExpr([](double v) { return gelu(v); });
  Mat ff = add_row(c.ff_act * p.ff2_w, p.ff2_b);
  c.ff_mask = drop ? dropout_mask(ff.rows(), ff.cols(), dropout, rng) : Mat();
  if (drop) ff = ff.cwiseProduct(c.ff_mask);
  return layer_norm(c.y1 + ff, p.ln2_g, p.ln2_b, &c.ln2);
}

Mat encoder_layer_backward(const EncoderLayerCache& c, const EncoderLayerParams& p, int heads, const Mat& d_out,
                           EncoderLayerParams& grads) {
  const Mat d_sum2 = layer_norm_backward(c.ln2, p.ln2_g, d_out, grads.ln2_g, grads.ln2_b);
  Mat d_y1 = d_sum2;
  Mat d_ff = d_sum2;
  if (c.ff_mask.size() > 0) d_ff = d_ff.cwiseProduct(c.ff_mask);
  grads.ff2_w.noalias() += c.ff_act.transpose() * d_ff;
  grads.ff2_b += col_sum(d_ff);
  const Mat d_act = d_ff * p.ff2_w.transpose();
  const Mat d_pre = d_act.array() * c.ff_pre.unaryExpr([](double v) { return gelu_grad(v); }).array();
  grads.ff1_w.noalias() += c.y1.transpose() * d_pre;
  grads.ff1_b += col_sum(d_pre);
  d_y1.noalias() += d_pre * p.ff1_w.transpose();

  const Mat d_sum1 = layer_norm_backward(c.ln1, p.ln1_g, d_y1, grads.ln1_g, grads.ln1_b);
  Mat d_attn = d_sum1;
  if (c.attn_mask.size() > 0) d_attn = d_attn.cwiseProduct(c.attn_mask);
  return d_sum1 + multi_head_attention_backward(c.attn, p.attn, heads, d_attn, grads.attn);
}

// ---- classifier ----------------------------------------------------------------------------

Mat classify(const Mat& t_o, const ClassifierParams& p, ClassifierCache* cache) {
  ClassifierCache local;
  ClassifierCache& c = cache != nullptr ? *cache : local;
  check_cols(t_o, p.w1.rows(), "classifier input");
  c.input = t_o;
  c.hidden_pre = add_row(t_o * p.w1, p.b1);
  if (p.norm == HeadNorm::Hidden) {
    c.normed = layer_norm(c.hidden_pre, p.ln_g, p.ln_b, &c.ln);
    c.hidden = c.normed.unaryExpr([](double v) { return gelu(v); });
    c.logits = add_row(c.hidden * p.w2, p.b2);
    c.probs = softmax_rows(c.logits);
  } else {
    c.hidden = c.hidden_pre.unaryExpr([](double v) { return gelu(v); });
    c.logits = add_row(c.hidden * p.w2, p.b2);
    c.normed = layer_norm(c.logits, p.ln_g, p.ln_b, &c.ln);
    c.probs = softmax_rows(c.normed);
  }
  return c.probs;
}

Mat classify_backward(const ClassifierCache& c, const ClassifierParams& p, const Mat& d_probs,
                      ClassifierParams& grads) {
  const Eigen::VectorXd row_dot = (d_probs.array() * c.probs.array()).rowwise().sum();
  const Mat d_softmax_in = c.probs.array() * (d_probs.array().colwise() - row_dot.array());
  const auto gelu_back = [](const Mat& d, const Mat& at) -> Mat {
    return d.array() * at.unaryExpr([](double v) { return gelu_grad(v); }).array();
  };
  Mat d_pre;
  if (p.norm == HeadNorm::Hidden) {
    grads.w2.noalias() += c.hidden.transpose() * d_softmax_in;
    grads.b2 += col_sum(d_softmax_in);
    const Mat d_normed = gelu_back(d_softmax_in * p.w2.transpose(), c.normed);
    d_pre = layer_norm_backward(c.ln, p.ln_g, d_normed, grads.ln_g, grads.ln_b);
  } else {
    const Mat d_logits = layer_norm_backward(c.ln, p.ln_g, d_softmax_in, grads.ln_g, grads.ln_b);
    grads.w2.noalias() += c.hidden.transpose() * d_logits;
    grads.b2 += col_sum(d_logits);
    d_pre = gelu_back(d_logits * p.w2.transpose(), c.hidden_pre);
  }
  grads.w1.noalias() += c.input.transpose() * d_pre;
  grads.b1 += col_sum(d_pre);
  return d_pre * p.w1.transpose();
}

}  // namespace cfjam::neural::layers
