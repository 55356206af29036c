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
#include <cmath>
#include <algorithm>
#include <numeric>
#include <vector>

#include "cfjam/layers.hpp"
#include "doctest.h"

using namespace cfjam;
using namespace cfjam::neural;
using namespace cfjam::neural::layers;

namespace {

Mat random_mat(RandomStream& rng, Eigen::Index r, Eigen::Index c, double scale = 0.5) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal(0.0, scale);
  return m;
}

GcnLayerParams random_gcn(RandomStream& rng, int h, int e) {
  return {random_mat(rng, h, h), random_mat(rng, e, h), random_mat(rng, h, 3 * h), random_mat(rng, h, 2 * h),
          random_mat(rng, h, h), random_mat(rng, 1, 3 * h)};
}

AttentionParams random_attention(RandomStream& rng, int h) {
  return {random_mat(rng, h, 3 * h), random_mat(rng, 1, 3 * h), random_mat(rng, h, h), random_mat(rng, 1, h)};
}

}  // namespace

TEST_CASE("gelu reference values") {
  CHECK(gelu(0.0) == 0.0);
  CHECK(gelu(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(gelu(-1.0) == doctest::Approx(-0.15865525393145707).epsilon(1e-14));
  CHECK(gelu_grad(0.0) == doctest::Approx(0.5));
  for (double x : {-2.0, -0.3, 0.7, 3.0}) {
    const double h = 1e-5;
    CHECK(gelu_grad(x) == doctest::Approx((gelu(x + h) - gelu(x - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("softmax and layer norm rows") {
  RandomStream rng(1);
  const Mat x = random_mat(rng, 6, 5, 3.0);
  const Mat p = softmax_rows(x);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.row(i).minCoeff() > 0.0);
  }
  Mat big(1, 2);
  big << 1000.0, 1000.0;
  CHECK(softmax_rows(big)(0, 0) == doctest::Approx(0.5));

  const Mat gain = Mat::Ones(1, 5);
  const Mat bias = Mat::Zero(1, 5);
  const Mat y = layer_norm(x, gain, bias, nullptr);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    CHECK(std::abs(y.row(i).mean()) < 1e-12);
    CHECK(y.row(i).squaredNorm() / 5.0 == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("dropout masks") {
  RandomStream rng(2);
  CHECK(dropout_mask(4, 4, 0.0, rng) == Mat::Ones(4, 4));
  const Mat m = dropout_mask(200, 200, 0.25, rng);
  int kept = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    CHECK((v == 0.0 || v == doctest::Approx(1.0 / 0.75)));
    kept += v > 0.0;
  }
  CHECK(kept / 40000.0 == doctest::Approx(0.75).epsilon(0.02));
  CHECK(m.mean() == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("graph convolution without edges is a message-free gated update") {
  RandomStream rng(3);
  const int h = 4;
  auto p = random_gcn(rng, h, 2);
  const Mat x = random_mat(rng, 5, h);
  Graph g;
  g.n_nodes = 5;
  const Mat y = gated_graph_conv(x, g, p, 2, nullptr);
  CHECK(y.rows() == 5);
  CHECK(y.allFinite());
  // Zero-initialized gates: z = 1/2, r = 1/2, c = 0, so each step halves the state.
  for (Mat* w : {&p.gate_m, &p.gate_h, &p.cand_h, &p.gate_b}) w->setZero();
  const Mat halved = gated_graph_conv(x, g, p, 2, nullptr);
  CHECK((halved - 0.25 * x).norm() < 1e-14);
}

TEST_CASE("single edge couples its endpoints only") {
  RandomStream rng(4);
  const int h = 3;
  const auto p = random_gcn(rng, h, 2);
  Graph g;
  g.n_nodes = 3;
  g.u = {0};
  g.v = {1};
  g.edge_features = random_mat(rng, 1, 2);
  const Mat x = random_mat(rng, 3, h);
  const Mat base = gated_graph_conv(x, g, p, 2, nullptr);
  // Finite-difference Jacobian blocks of output rows with respect to input row 0.
  Mat d_out1 = Mat::Zero(h, h);
  Mat d_out2 = Mat::Zero(h, h);
  const double eps = 1e-6;
  for (int k = 0; k < h; ++k) {
    Mat plus = x;
    Mat minus = x;
    plus(0, k) += eps;
    minus(0, k) -= eps;
    const Mat diff = (gated_graph_conv(plus, g, p, 2, nullptr) - gated_graph_conv(minus, g, p, 2, nullptr)) / (2 * eps);
    d_out1.col(k) = diff.row(1).transpose();
    d_out2.col(k) = diff.row(2).transpose();
  }
  CHECK(d_out1.norm() > 1e-3);
  CHECK(d_out2.norm() == 0.0);
  // Messages flow both ways.
  Graph reversed = g;
  std::swap(reversed.u, reversed.v);
  CHECK((gated_graph_conv(x, reversed, p, 2, nullptr) - base).norm() < 1e-14);
}

TEST_CASE("graph convolution is permutation equivariant") {
  RandomStream rng(5);
  const int h = 4;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_gcn(rng, h, 2);
    const int n = 7;
    Graph g;
    g.n_nodes = n;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng.uniform(0, 1) < 0.3) {
          g.u.push_back(a);
          g.v.push_back(b);
        }
      }
    }
    g.edge_features = random_mat(rng, g.n_edges(), 2);
    const Mat x = random_mat(rng, n, h);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    // Node i moves to perm[i].
    Graph pg = g;
    Mat px(n, h);
    for (int i = 0; i < n; ++i) px.row(perm[i]) = x.row(i);
    for (int e = 0; e < g.n_edges(); ++e) {
      pg.u[e] = perm[g.u[e]];
      pg.v[e] = perm[g.v[e]];
    }
    const Mat y = gated_graph_conv(x, g, p, 2, nullptr);
    const Mat py = gated_graph_conv(px, pg, p, 2, nullptr);
    for (int i = 0; i < n; ++i) CHECK((py.row(perm[i]) - y.row(i)).norm() < 1e-12);
  }
}

TEST_CASE("single-head attention on two steps matches a closed form") {
  const int h = 2;
  AttentionParams p;
  p.in_w.resize(h, 3 * h);
  p.in_w << 1.0, 0.0, 0.5, -1.0, 1.0, 2.0,  //
      0.0, 1.0, 1.0, 0.5, -1.0, 0.0;
  p.in_b = Mat::Zero(1, 3 * h);
  p.in_b(0, 4) = 0.1;
  p.out_w = Mat::Identity(h, h);
  p.out_b = Mat::Zero(1, h);
  Mat x(2, h);
  x << 1.0, 2.0,  //
      -1.0, 0.5;
  // q = x Wq, k = x Wk, v = x Wv + bv, attention softmax(q k^T / sqrt(2)) v.
  const double q[2][2] = {{1.0, 2.0}, {-1.0, 0.5}};
  const double k[2][2] = {{0.5 + 2.0, -1.0 + 1.0}, {-0.5 + 0.5, 1.0 + 0.25}};
  const double v[2][2] = {{1.0 - 2.0 + 0.1, 2.0}, {-1.0 - 0.5 + 0.1, -2.0}};
  Mat expected(2, 2);
  for (int i = 0; i < 2; ++i) {
    double s[2];
    for (int j = 0; j < 2; ++j) s[j] = (q[i][0] * k[j][0] + q[i][1] * k[j][1]) / std::sqrt(2.0);
    const double w0 = 1.0 / (1.0 + std::exp(s[1] - s[0]));
    for (int c = 0; c < 2; ++c) expected(i, c) = w0 * v[0][c] + (1.0 - w0) * v[1][c];
  }
  RandomStream rng(0);
  AttentionCache cache;
  const Mat y = multi_head_attention(x, p, 1, 0.0, false, rng, &cache);
  CHECK((y - expected).norm() < 1e-12);
  REQUIRE(cache.probs.size() == 1);
  CHECK(cache.probs[0].row(0).sum() == doctest::Approx(1.0));
  CHECK(cache.probs[0].row(1).sum() == doctest::Approx(1.0));
}

TEST_CASE("attention rows sum to one per head") {
  RandomStream rng(6);
  const auto p = random_attention(rng, 8);
  AttentionCache cache;
  multi_head_attention(random_mat(rng, 10, 8, 2.0), p, 4, 0.0, false, rng, &cache);
  REQUIRE(cache.probs.size() == 4);
  for (const auto& probs : cache.probs) {
    for (Eigen::Index i = 0; i < probs.rows(); ++i) CHECK(probs.row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("encoder layer maps a constant sequence to equal rows") {
  RandomStream rng(7);
  const int h = 8;
  EncoderLayerParams p;
  p.attn = random_attention(rng, h);
  p.ff1_w = random_mat(rng, h, 12);
  p.ff1_b = random_mat(rng, 1, 12);
  p.ff2_w = random_mat(rng, 12, h);
  p.ff2_b = random_mat(rng, 1, h);
  p.ln1_g = p.ln2_g = Mat::Ones(1, h);
  p.ln1_b = p.ln2_b = Mat::Zero(1, h);
  const Mat row = random_mat(rng, 1, h);
  const Mat x = row.replicate(10, 1);
  const Mat y = encoder_layer(x, p, 2, 0.0, false, rng, nullptr);
  for (Eigen::Index i = 1; i < y.rows(); ++i) CHECK((y.row(i) - y.row(0)).norm() < 1e-12);
  // Dropout in eval mode changes nothing.
  CHECK((encoder_layer(x, p, 2, 0.5, false, rng, nullptr) - y).norm() == 0.0);
}

TEST_CASE("classifier outputs are probabilities") {
  RandomStream rng(8);
  for (HeadNorm norm : {HeadNorm::Hidden, HeadNorm::Logits}) {
    const int width = norm == HeadNorm::Hidden ? 5 : 2;
    ClassifierParams p{random_mat(rng, 6, 5), random_mat(rng, 1, 5), random_mat(rng, 5, 2), random_mat(rng, 1, 2),
                       Mat::Ones(1, width), Mat::Zero(1, width), norm};
    const Mat probs = classify(random_mat(rng, 4, 6, 3.0), p, nullptr);
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      CHECK(std::abs(probs.row(i).sum() - 1.0) < 1e-12);
      CHECK(probs.row(i).minCoeff() > 0.0);
      CHECK(probs.row(i).maxCoeff() < 1.0);
    }
  }
}

TEST_CASE("normalized equal logits give an even split") {
  RandomStream rng(9);
  // W2 with identical columns and equal biases makes both logits equal.
  Mat w2(5, 2);
  const Mat col = random_mat(rng, 5, 1);
  w2 << col, col;
  ClassifierParams p{random_mat(rng, 6, 5), random_mat(rng, 1, 5), w2, Mat::Constant(1, 2, 0.3),
                     Mat::Ones(1, 2), Mat::Zero(1, 2), HeadNorm::Logits};
  const Mat probs = classify(random_mat(rng, 3, 6), p, nullptr);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(probs(i, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(probs(i, 1) == doctest::Approx(0.5).epsilon(1e-12));
  }
}
