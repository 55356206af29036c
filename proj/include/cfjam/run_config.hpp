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

#include <string>
#include <vector>

#include "cfjam/dataset.hpp"
#include "cfjam/neural.hpp"
#include "cfjam/training.hpp"

namespace cfjam::cli {

/// Everything one CLI run needs. Sections of the config file map onto the embedded structs:
/// [channel] [mobility] [topology] [dataset] [neural] [training] [cli].
struct RunConfig {
  dataset::ScenarioConfig scenario;
  neural::ModelConfig model;
  training::TrainConfig train;
  int sequences = 2200;
  std::vector<int> tau_set = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string dataset_dir = "data";
  std::string checkpoint_path = "run/model.ckpt";
  std::string log_path = "run/train.log";
  std::string report_path = "run/report";
  int threads = 1;

  /// Copies scenario-derived fields (n_steps, area side, thread count) into the model and
  /// training configs, then validates every part.
  void finalize();
  void validate() const;
};

/// Sets `section.key` from its text form. Unknown keys and unparsable values throw Configuration
/// with the qualified key in the message.
void apply_setting(RunConfig& config, const std::string& section, const std::string& key, const std::string& value);

/// Applies every key of an INI document on top of `config`.
void apply_ini(RunConfig& config, const std::string& ini_text);
void apply_ini_file(RunConfig& config, const std::string& path);

/// Fully resolved configuration as INI text; apply_ini on defaults reproduces `config`.
std::string render_ini(const RunConfig& config);

std::vector<int> parse_int_list(const std::string& value, const std::string& key);

}  // namespace cfjam::cli
