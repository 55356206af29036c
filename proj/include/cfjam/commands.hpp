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

#include <functional>
#include <string>

#include "cfjam/run_config.hpp"

namespace cfjam::cli {

enum class Command { Generate, Train, Eval };

/// Progress sink for long-running commands; receives one line per call.
using LineSink = std::function<void(const std::string&)>;

/// Redirects the command's outputs into `out_dir`:
/// generate -> the dataset directory; train -> model.ckpt and train.log; eval -> the report directory.
void apply_out_dir(RunConfig& config, Command command, const std::string& out_dir);

/// Name of the resolved-configuration echo written beside every command's output.
inline constexpr const char* kResolvedConfigName = "resolved_config.ini";

/// Writes the dataset and prints per-label, per-tau and per-split counts plus mean edges per snapshot.
std::string cmd_generate(RunConfig config, const LineSink& progress = {});
/// Trains on the dataset's train/validation splits; writes the best checkpoint and appends to the log.
std::string cmd_train(RunConfig config, const LineSink& progress = {});
/// Evaluates the checkpoint on the test split; with `sweep_tau` also writes sweep.csv.
std::string cmd_eval(RunConfig config, bool sweep_tau, const LineSink& progress = {});

}  // namespace cfjam::cli
