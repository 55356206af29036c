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
#include "cfjam/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "cfjam/error.hpp"
#include "cfjam/parallel.hpp"
#include "cfjam/text.hpp"

namespace cfjam::training {

void TrainConfig::validate() const {
  require(epochs >= 0, ErrorCode::Configuration, "training.epochs must be non-negative");
  require(learning_rate >= 0.0, ErrorCode::Configuration, "training.learning_rate must be non-negative");
  require(weight_decay >= 0.0, ErrorCode::Configuration, "training.weight_decay must be non-negative");
  require(batch_size >= 1, ErrorCode::Configuration, "training.batch_size must be at least 1");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, ErrorCode::Configuration, "training.adam_beta1 must lie in [0, 1)");
  require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, ErrorCode::Configuration, "training.adam_beta2 must lie in [0, 1)");
  require(adam_epsilon > 0.0, ErrorCode::Configuration, "training.adam_epsilon must be positive");
  require(decision_threshold >= 0.0 && decision_threshold <= 1.0, ErrorCode::Configuration,
          "training.decision_threshold must lie in [0, 1]");
}

double Metrics::accuracy() const {
  const long n = total();
  return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double Metrics::f1() const {
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

void Metrics::add(int predicted, int label) {
  if (predicted == 1 && label == 1) ++tp;
  else if (predicted == 0 && label == 0) ++tn;
  else if (predicted == 1) ++fp;
  else ++fn;
}

Metrics metrics_from_counts(long tp, long tn, long fp, long fn) {
  require(tp >= 0 && tn >= 0 && fp >= 0 && fn >= 0, ErrorCode::InvalidArgument, "confusion counts must be >= 0");
  return Metrics{tp, tn, fp, fn};
}

AdamState AdamState::for_params(const neural::ModelConfig& config) {
  return AdamState{neural::ModelParams::zeros(config), neural::ModelParams::zeros(config), 0};
}

namespace {

struct AdamCoefficients {
  double lr, decay, b1, b2, c1, c2, eps;
};

AdamCoefficients coefficients(long step_index, const TrainConfig& c) {
  require(step_index >= 1, ErrorCode::InvalidArgument, "Adam step index is 1-based");
  const double t = static_cast<double>(step_index);
  return {c.learning_rate, c.learning_rate * c.weight_decay, c.adam_beta1, c.adam_beta2,
          1.0 - std::pow(c.adam_beta1, t), 1.0 - std::pow(c.adam_beta2, t), c.adam_epsilon};
}

// Activation buffers of a few MB are allocated per pass; keep them on the heap instead of
// fresh mmap pages that fault on every touch.
void tune_allocator() {
#if defined(__GLIBC__)
  static const bool once = [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
    return true;
  }();
  (void)once;
#endif
}

inline void update_one(double& theta, double g, double& m, double& v, const AdamCoefficients& k) {
  theta -= k.decay * theta;
  m = k.b1 * m + (1.0 - k.b1) * g;
  v = k.b2 * v + (1.0 - k.b2) * g * g;
  const double m_hat = m / k.c1;
  const double v_hat = v / k.c2;
  theta -= k.lr * m_hat / (std::sqrt(v_hat) + k.eps);
}

}  // namespace

void adam_update(std::vector<double>& theta, const std::vector<double>& grad, std::vector<double>& m,
                 std::vector<double>& v, long step_index, const TrainConfig& config) {
  require(theta.size() == grad.size() && theta.size() == m.size() && theta.size() == v.size(),
          ErrorCode::ShapeMismatch, "Adam: parameter, gradient and moment sizes differ");
  const auto k = coefficients(step_index, config);
  for (std::size_t i = 0; i < theta.size(); ++i) update_one(theta[i], grad[i], m[i], v[i], k);
}

void adam_step(neural::ModelParams& params, const neural::ModelParams& grads, AdamState& state, long step_index,
               const TrainConfig& config) {
  const auto k = coefficients(step_index, config);
  std::vector<const neural::Mat*> g;
  std::vector<neural::Mat*> ms, v_list;
  grads.for_each([&g](const std::string&, const neural::Mat& x) { g.push_back(&x); });
  state.m.for_each([&ms](const std::string&, neural::Mat& x) { ms.push_back(&x); });
  state.v.for_each([&v_list](const std::string&, neural::Mat& x) { v_list.push_back(&x); });
  std::size_t i = 0;
  params.for_each([&](const std::string& name, neural::Mat& theta) {
    require(i < g.size() && g[i]->size() == theta.size() && ms[i]->size() == theta.size() &&
                v_list[i]->size() == theta.size(),
            ErrorCode::ShapeMismatch, "Adam: shape mismatch at " + name);
    double* th = theta.data();
    const double* gr = g[i]->data();
    double* m = ms[i]->data();
    double* v = v_list[i]->data();
    for (Eigen::Index j = 0; j < theta.size(); ++j) update_one(th[j], gr[j], m[j], v[j], k);
    ++i;
  });
  state.step = step_index;
}

std::vector<Example> make_examples(const std::vector<dataset::GraphSequence>& sequences, double area_side) {
  std::vector<Example> out;
  out.reserve(sequences.size());
  for (const auto& s : sequences) out.push_back({neural::build_sequence_graph(s, area_side), s.label, s.tau, s.id});
  return out;
}

std::string EpochRecord::to_line() const {
  std::ostringstream os;
  os << "epoch=" << epoch << " train_loss=" << text::format_double(train_loss)
     << " train_accuracy=" << text::format_double(train_accuracy) << " val_loss=" << text::format_double(val_loss)
     << " val_accuracy=" << text::format_double(val_accuracy) << " val_f1=" << text::format_double(val_f1)
     << " best=" << (improved ? 1 : 0);
  return os.str();
}

Evaluation evaluate(const neural::ModelParams& params, const neural::ModelConfig& config,
                    const std::vector<Example>& examples, double decision_threshold, int threads) {
  require(!examples.empty(), ErrorCode::InvalidArgument, "evaluation set is empty");
  tune_allocator();
  Evaluation ev;
  ev.p_jammed.assign(examples.size(), 0.0);
  std::vector<double> losses(examples.size(), 0.0);
  parallel_for(examples.size(), threads, [&](std::size_t i) {
    RandomStream unused(0);
    const neural::Mat p = neural::forward(examples[i].input, params, config, false, unused);
    ev.p_jammed[i] = p(0, neural::kClassJammed);
    losses[i] = neural::cross_entropy(p, examples[i].label);
  });
  for (std::size_t i = 0; i < examples.size(); ++i) {
    ev.metrics.add(ev.p_jammed[i] > decision_threshold ? 1 : 0, examples[i].label);
  }
  ev.mean_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
  return ev;
}

TrainResult train(const neural::ModelConfig& model_config, const TrainConfig& config,
                  const std::vector<Example>& train_set, const std::vector<Example>& validation_set,
                  const EpochCallback& on_epoch) {
  model_config.validate();
  RandomStream init_rng(derive_seed(config.seed, 0x1417ULL));
  return train_from(neural::ModelParams::initialized(model_config, init_rng), model_config, config, train_set,
                    validation_set, on_epoch);
}

TrainResult train_from(neural::ModelParams params, const neural::ModelConfig& model_config, const TrainConfig& config,
                       const std::vector<Example>& train_set, const std::vector<Example>& validation_set,
                       const EpochCallback& on_epoch) {
  config.validate();
  model_config.validate();
  require(!train_set.empty(), ErrorCode::InvalidArgument, "training split is empty");
  require(!validation_set.empty(), ErrorCode::InvalidArgument, "validation split is empty");
  tune_allocator();

  TrainResult result;
  result.best_params = params;
  result.best.val_accuracy = -1.0;
  result.best.val_loss = std::numeric_limits<double>::infinity();

  AdamState adam = AdamState::for_params(model_config);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::vector<neural::ModelParams> slot_grads(batch, neural::ModelParams::zeros(model_config));
  neural::ModelParams grads = neural::ModelParams::zeros(model_config);
  std::vector<double> slot_loss(batch, 0.0);
  std::vector<int> slot_correct(batch, 0);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  double best_strict_accuracy = -1.0;
  int since_improvement = 0;
  long step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    RandomStream shuffle_rng(derive_seed(config.seed, 0x5000ULL + static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());

    double loss_sum = 0.0;
    long correct = 0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t count = std::min(batch, order.size() - start);
      parallel_for(count, config.threads, [&](std::size_t j) {
        const Example& ex = train_set[order[start + j]];
        RandomStream dropout_rng(derive_seed(derive_seed(config.seed, 0xD000ULL + static_cast<std::uint64_t>(epoch)),
                                             static_cast<std::uint64_t>(start + j)));
        slot_grads[j].set_zero();
        neural::Mat probs;
        slot_loss[j] = neural::loss_and_gradient(ex.input, ex.label, params, model_config, true, dropout_rng,
                                                 slot_grads[j], &probs);
        slot_correct[j] = ((probs(0, neural::kClassJammed) > config.decision_threshold ? 1 : 0) == ex.label) ? 1 : 0;
      });
      // Fixed-order reduction keeps results independent of the thread count.
      grads.set_zero();
      double batch_loss = 0.0;
      for (std::size_t j = 0; j < count; ++j) {
        grads.add_scaled(slot_grads[j], 1.0 / static_cast<double>(count));
        batch_loss += slot_loss[j];
        correct += slot_correct[j];
      }
      loss_sum += batch_loss / static_cast<double>(count);
      ++batches;
      adam_step(params, grads, adam, ++step, config);
    }

    const Evaluation val = evaluate(params, model_config, validation_set, config.decision_threshold, config.threads);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / std::max(1, batches);
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_set.size());
    rec.val_loss = val.mean_loss;
    rec.val_accuracy = val.metrics.accuracy();
    rec.val_f1 = val.metrics.f1();

    const bool strictly_better = rec.val_accuracy > best_strict_accuracy;
    const bool tie_better = rec.val_accuracy == result.best.val_accuracy && rec.val_loss < result.best.val_loss;
    if (strictly_better || tie_better) {
      rec.improved = true;
      result.best = rec;
      result.best_params = params;
    }
    if (strictly_better) {
      best_strict_accuracy = rec.val_accuracy;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    result.log.push_back(rec);

    if (on_epoch && !on_epoch(rec, params)) break;
    if (config.early_stop_patience > 0 && since_improvement >= config.early_stop_patience) {
      result.stopped_early = epoch < config.epochs;
      break;
    }
  }
  return result;
}

std::vector<SweepRow> sweep_tau(const std::vector<int>& predictions, const std::vector<Example>& examples,
                                const std::vector<int>& tau_set, std::uint64_t seed) {
  require(predictions.size() == examples.size(), ErrorCode::ShapeMismatch, "one prediction per example required");
  std::vector<std::size_t> clean;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].label == 0) clean.push_back(i);
  }
  std::vector<SweepRow> rows;
  for (int tau : tau_set) {
    std::vector<std::size_t> jammed;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (examples[i].label == 1 && examples[i].tau == tau) jammed.push_back(i);
    }
    if (jammed.empty()) fail(ErrorCode::NotFound, "no jammed test sequences with tau=" + std::to_string(tau));
    require(!clean.empty(), ErrorCode::NotFound, "no clean test sequences to pair with tau=" + std::to_string(tau));

    std::vector<std::size_t> pool = clean;
    RandomStream rng(derive_seed(seed, 0x7A0ULL + static_cast<std::uint64_t>(tau)));
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    const std::size_t n = std::min(jammed.size(), pool.size());
    SweepRow row;
    row.tau = tau;
    for (std::size_t k = 0; k < n; ++k) {
      row.metrics.add(predictions[jammed[k]], 1);
      row.metrics.add(predictions[pool[k]], 0);
    }
    row.n_jammed = static_cast<int>(n);
    row.n_clean = static_cast<int>(n);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> sweep_tau(const neural::ModelParams& params, const neural::ModelConfig& config,
                                const std::vector<Example>& examples, const std::vector<int>& tau_set,
                                double decision_threshold, std::uint64_t seed, int threads) {
  const Evaluation ev = evaluate(params, config, examples, decision_threshold, threads);
  std::vector<int> predictions(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) predictions[i] = ev.p_jammed[i] > decision_threshold ? 1 : 0;
  return sweep_tau(predictions, examples, tau_set, seed);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "tau,accuracy,f1\n";
  for (const auto& r : rows) {
    out += std::to_string(r.tau) + "," + text::format_double(r.metrics.accuracy()) + "," +
           text::format_double(r.metrics.f1()) + "\n";
  }
  return out;
}

}  // namespace cfjam::training
