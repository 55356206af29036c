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
#include <limits>
#include <string>
#include <vector>

#include "cfjam/dataset.hpp"
#include "cfjam/neural.hpp"

namespace cfjam::training {

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1.2e-4;
  double weight_decay = 1e-6;
  int batch_size = 8;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int early_stop_patience = 5;  // <= 0 disables early stopping
  std::uint64_t seed = 1;
  double decision_threshold = 0.5;
  int threads = 1;

  void validate() const;
};

struct Metrics {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }
  /// (tp + tn) / total; 0 for an empty tally.
  double accuracy() const;
  /// 2tp / (2tp + fp + fn); 1 when tp = fp = fn = 0.
  double f1() const;
  void add(int predicted, int label);
};

Metrics metrics_from_counts(long tp, long tn, long fp, long fn);

/// First and second moment estimates, shaped like the parameters.
struct AdamState {
  neural::ModelParams m;
  neural::ModelParams v;
  long step = 0;

  static AdamState for_params(const neural::ModelConfig& config);
};

/// Decoupled weight decay (theta -= lr * wd * theta), then the bias-corrected Adam update.
/// `step_index` is 1-based.
void adam_step(neural::ModelParams& params, const neural::ModelParams& grads, AdamState& state, long step_index,
               const TrainConfig& config);

/// Flat-array form of the same update, used for single-tensor checks.
void adam_update(std::vector<double>& theta, const std::vector<double>& grad, std::vector<double>& m,
                 std::vector<double>& v, long step_index, const TrainConfig& config);

/// Sequence with its precomputed model input.
struct Example {
  neural::SequenceGraph input;
  int label = 0;
  int tau = 0;
  int id = 0;
};
std::vector<Example> make_examples(const std::vector<dataset::GraphSequence>& sequences, double area_side);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;  // from the training-mode passes of the epoch
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double val_f1 = 0.0;
  bool improved = false;

  std::string to_line() const;
};

struct TrainResult {
  neural::ModelParams best_params;
  EpochRecord best;
  std::vector<EpochRecord> log;
  bool stopped_early = false;
};

/// Called after every epoch with the record and the current (not necessarily best) parameters.
/// Returning false stops training.
using EpochCallback = std::function<bool(const EpochRecord&, const neural::ModelParams&)>;

/// Mini-batch training with seeded shuffling, validation each epoch, best-checkpoint retention
/// (higher validation accuracy, ties to lower validation loss) and patience-based early stopping.
TrainResult train(const neural::ModelConfig& model_config, const TrainConfig& config, const std::vector<Example>& train_set,
                  const std::vector<Example>& validation_set, const EpochCallback& on_epoch = {});
/// Continues from given parameters instead of a fresh initialization.
TrainResult train_from(neural::ModelParams params, const neural::ModelConfig& model_config, const TrainConfig& config,
                       const std::vector<Example>& train_set, const std::vector<Example>& validation_set,
                       const EpochCallback& on_epoch = {});

struct Evaluation {
  Metrics metrics;
  double mean_loss = 0.0;
  std::vector<double> p_jammed;  // per example, in input order
};

/// Inference-mode classification: jammed iff p[jammed] > threshold.
Evaluation evaluate(const neural::ModelParams& params, const neural::ModelConfig& config,
                    const std::vector<Example>& examples, double decision_threshold, int threads = 1);

struct SweepRow {
  int tau = 0;
  int n_jammed = 0;
  int n_clean = 0;
  Metrics metrics;
};

/// Per-tau balanced evaluation: each row pairs that tau's jammed examples with an equal number of clean
/// examples drawn deterministically from `seed`. Throws NotFound if a tau in `tau_set` has no examples.
std::vector<SweepRow> sweep_tau(const std::vector<int>& predictions_by_example, const std::vector<Example>& examples,
                                const std::vector<int>& tau_set, std::uint64_t seed);
std::vector<SweepRow> sweep_tau(const neural::ModelParams& params, const neural::ModelConfig& config,
                                const std::vector<Example>& examples, const std::vector<int>& tau_set,
                                double decision_threshold, std::uint64_t seed, int threads = 1);

/// CSV with header `tau,accuracy,f1` (one row per tau).
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace cfjam::training
