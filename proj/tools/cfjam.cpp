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
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cfjam/cfjam.h"

namespace {

struct Options {
  std::string config_file;
  std::optional<long long> seed;
  std::optional<double> beta;
  std::optional<std::string> tau_set;
  std::optional<int> sequences;
  std::optional<int> threads;
  std::optional<std::string> dataset;
  std::optional<std::string> checkpoint;
  std::string out;
  bool sweep_tau = false;
};

void print_line(const char* line, void*) {
  std::fprintf(stderr, "%s\n", line);
  std::fflush(stderr);
}

int report_failure(const char* what, cfjam_status status) {
  std::fprintf(stderr, "cfjam: %s failed (%s): %s\n", what, cfjam_status_name(status), cfjam_last_error());
  return 1 + static_cast<int>(status);
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_file, "INI configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed for both data generation and training");
  cmd->add_option("--beta", o.beta, "Line-of-sight factor: 1 deterministic, 0 fading");
  cmd->add_option("--tau-set", o.tau_set, "Jammer persistence values, e.g. 1,2,3 or 10");
  cmd->add_option("--sequences", o.sequences, "Number of sequences to generate");
  cmd->add_option("--threads", o.threads, "Worker threads")->envname("CFJAM_THREADS")->check(CLI::PositiveNumber);
  cmd->add_option("--dataset", o.dataset, "Dataset directory to read");
  cmd->add_option("--checkpoint", o.checkpoint, "Checkpoint file to read");
  cmd->add_option("--out", o.out, "Output directory for this command");
}

cfjam_status build_config(const Options& o, cfjam_config** out) {
  cfjam_config* cfg = nullptr;
  cfjam_status st = cfjam_config_create(&cfg);
  if (st != CFJAM_OK) return st;
  auto set = [&](const char* section, const char* key, const std::string& value) {
    if (st == CFJAM_OK) st = cfjam_config_set(cfg, section, key, value.c_str());
  };
  if (!o.config_file.empty()) st = cfjam_config_load(cfg, o.config_file.c_str());
  if (o.seed) {
    set("dataset", "seed", std::to_string(*o.seed));
    set("training", "seed", std::to_string(*o.seed));
  }
  if (o.beta) set("channel", "beta", CLI::detail::to_string(*o.beta));
  if (o.tau_set) set("dataset", "tau_set", *o.tau_set);
  if (o.sequences) set("dataset", "sequences", std::to_string(*o.sequences));
  if (o.threads) set("cli", "threads", std::to_string(*o.threads));
  if (o.dataset) set("dataset", "dataset_dir", *o.dataset);
  if (o.checkpoint) set("cli", "checkpoint_path", *o.checkpoint);
  if (st != CFJAM_OK) {
    cfjam_config_destroy(cfg);
    return st;
  }
  *out = cfg;
  return CFJAM_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jamming detection for cell-free MIMO networks with dynamic graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cfjam_version()));

  Options o;
  auto* gen = app.add_subcommand("generate", "Simulate a labelled dataset of dynamic graph sequences");
  auto* train = app.add_subcommand("train", "Train the detector on a generated dataset");
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  for (auto* cmd : {gen, train, eval}) add_common(cmd, o);
  eval->add_flag("--sweep-tau", o.sweep_tau, "Also write the per-tau accuracy/F1 table");

  CLI11_PARSE(app, argc, argv);

  cfjam_config* cfg = nullptr;
  cfjam_status st = build_config(o, &cfg);
  if (st != CFJAM_OK) return report_failure("configuration", st);

  const char* out_dir = o.out.empty() ? nullptr : o.out.c_str();
  char* report = nullptr;
  const char* what = "";
  if (gen->parsed()) {
    what = "generate";
    st = cfjam_generate(cfg, out_dir, print_line, nullptr, &report);
  } else if (train->parsed()) {
    what = "train";
    st = cfjam_train(cfg, out_dir, print_line, nullptr, &report);
  } else {
    what = "eval";
    st = cfjam_eval(cfg, out_dir, o.sweep_tau ? 1 : 0, print_line, nullptr, &report);
  }
  cfjam_config_destroy(cfg);
  if (st != CFJAM_OK) return report_failure(what, st);
  std::fputs(report, stdout);
  cfjam_string_free(report);
  return 0;
}
