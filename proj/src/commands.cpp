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
#include "cfjam/commands.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cfjam/error.hpp"
#include "cfjam/text.hpp"

namespace cfjam::cli {

namespace fs = std::filesystem;
using text::format_double;

namespace {

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::Io, "cannot create directory '" + dir.string() + "'");
}

void write_text(const fs::path& path, const std::string& body) {
  ensure_dir(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  f << body;
  if (!f) fail(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

dataset::DatasetManifest require_dataset(const RunConfig& config) {
  const fs::path manifest = fs::path(config.dataset_dir) / "manifest";
  if (!fs::exists(manifest)) {
    fail(ErrorCode::NotFound, "dataset not found: expected a manifest at '" + manifest.string() + "'");
  }
  return dataset::load_manifest(manifest);
}

std::string metrics_line(const training::Metrics& m) {
  return "accuracy=" + format_double(m.accuracy()) + " f1=" + format_double(m.f1()) + " tp=" + std::to_string(m.tp) +
         " tn=" + std::to_string(m.tn) + " fp=" + std::to_string(m.fp) + " fn=" + std::to_string(m.fn) +
         " n=" + std::to_string(m.total());
}

}  // namespace

void apply_out_dir(RunConfig& config, Command command, const std::string& out_dir) {
  if (out_dir.empty()) return;
  const fs::path out(out_dir);
  switch (command) {
    case Command::Generate:
      config.dataset_dir = out.string();
      break;
    case Command::Train:
      config.checkpoint_path = (out / "model.ckpt").string();
      config.log_path = (out / "train.log").string();
      break;
    case Command::Eval:
      config.report_path = out.string();
      break;
  }
}

std::string cmd_generate(RunConfig config, const LineSink& progress) {
  config.finalize();
  const fs::path dir(config.dataset_dir);
  ensure_dir(dir);
  if (progress) {
    progress("generating " + std::to_string(config.sequences) + " sequences (" + config.scenario.scenario_tag() +
             ") into " + dir.string());
  }
  dataset::DatasetStats stats;
  const auto manifest =
      dataset::generate_dataset(config.scenario, config.sequences, config.tau_set, dir, config.threads, &stats);
  write_text(dir / kResolvedConfigName, render_ini(config));

  std::map<std::pair<int, int>, std::array<int, 3>> per_stratum;  // (label, tau) -> train/val/test
  for (const auto& e : manifest.entries) ++per_stratum[{e.label, e.tau}][static_cast<int>(e.split)];

  std::ostringstream os;
  os << "dataset " << dir.string() << "\n";
  os << "scenario " << config.scenario.scenario_tag() << " digest " << manifest.config_digest << "\n";
  os << "sequences " << stats.total << " clean " << stats.clean << " jammed " << stats.jammed << "\n";
  os << "split train " << manifest.ids(dataset::Split::Train).size() << " validation "
     << manifest.ids(dataset::Split::Validation).size() << " test " << manifest.ids(dataset::Split::Test).size()
     << "\n";
  for (const auto& [key, counts] : per_stratum) {
    os << "stratum label=" << key.first << " tau=" << key.second << " train " << counts[0] << " validation "
       << counts[1] << " test " << counts[2] << "\n";
  }
  os << "mean_edges_per_snapshot " << format_double(stats.mean_edges_per_snapshot) << "\n";
  return os.str();
}

std::string cmd_train(RunConfig config, const LineSink& progress) {
  config.finalize();
  const auto manifest = require_dataset(config);
  if (manifest.n_steps != config.model.n_steps) {
    fail(ErrorCode::Configuration, "dataset has n_steps " + std::to_string(manifest.n_steps) +
                                       " but the configuration says " + std::to_string(config.model.n_steps));
  }
  const fs::path dir(config.dataset_dir);
  const auto train_seq = dataset::load_split(dir, manifest, dataset::Split::Train, config.threads);
  const auto val_seq = dataset::load_split(dir, manifest, dataset::Split::Validation, config.threads);
  const auto train_set = training::make_examples(train_seq, config.model.area_side);
  const auto val_set = training::make_examples(val_seq, config.model.area_side);

  const fs::path ckpt(config.checkpoint_path);
  const fs::path log_path(config.log_path);
  ensure_dir(ckpt.parent_path());
  ensure_dir(log_path.parent_path());
  write_text(ckpt.parent_path() / kResolvedConfigName, render_ini(config));

  std::ofstream log(log_path, std::ios::app);
  if (!log) fail(ErrorCode::Io, "cannot open training log '" + log_path.string() + "'");
  log << "run seed=" << config.train.seed << " dataset=" << manifest.config_digest << " train=" << train_set.size()
      << " validation=" << val_set.size() << "\n";
  log.flush();

  const auto result = training::train(
      config.model, config.train, train_set, val_set,
      [&](const training::EpochRecord& rec, const neural::ModelParams&) {
        log << rec.to_line() << "\n";
        log.flush();
        if (progress) progress(rec.to_line());
        return true;
      });

  neural::Checkpoint ck{config.model, result.best_params, manifest.config_digest, config.train.decision_threshold};
  neural::save_checkpoint(ck, ckpt);

  std::ostringstream os;
  os << "checkpoint " << ckpt.string() << "\n";
  os << "parameters " << result.best_params.parameter_count() << "\n";
  os << "epochs " << result.log.size() << (result.stopped_early ? " (early stop)" : "") << "\n";
  os << "best_epoch " << result.best.epoch << " val_accuracy " << format_double(result.best.val_accuracy)
     << " val_f1 " << format_double(result.best.val_f1) << " val_loss " << format_double(result.best.val_loss)
     << "\n";
  return os.str();
}

std::string cmd_eval(RunConfig config, bool sweep_tau, const LineSink& progress) {
  config.finalize();
  const auto ck = neural::load_checkpoint(config.checkpoint_path);
  const auto manifest = require_dataset(config);
  std::ostringstream os;
  if (!ck.dataset_digest.empty() && ck.dataset_digest != manifest.config_digest) {
    const std::string warning = "warning: checkpoint was trained on dataset " + ck.dataset_digest +
                                " but the evaluated dataset has digest " + manifest.config_digest;
    if (progress) progress(warning);
    os << warning << "\n";
  }
  if (manifest.n_steps != ck.config.n_steps) {
    fail(ErrorCode::ShapeMismatch, "checkpoint expects " + std::to_string(ck.config.n_steps) +
                                       " steps, dataset has " + std::to_string(manifest.n_steps));
  }
  const auto test_seq =
      dataset::load_split(fs::path(config.dataset_dir), manifest, dataset::Split::Test, config.threads);
  const auto test_set = training::make_examples(test_seq, ck.config.area_side);
  const auto ev = training::evaluate(ck.params, ck.config, test_set, ck.decision_threshold, config.threads);

  const fs::path report(config.report_path);
  ensure_dir(report);
  write_text(report / kResolvedConfigName, render_ini(config));
  std::ostringstream metrics;
  metrics << "checkpoint " << config.checkpoint_path << "\n";
  metrics << "dataset " << config.dataset_dir << " split test\n";
  metrics << metrics_line(ev.metrics) << "\n";
  metrics << "mean_loss=" << format_double(ev.mean_loss) << "\n";
  write_text(report / "metrics.txt", metrics.str());
  os << metrics.str();

  if (sweep_tau) {
    std::vector<int> preds(test_set.size());
    for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = ev.p_jammed[i] > ck.decision_threshold ? 1 : 0;
    const auto rows = training::sweep_tau(preds, test_set, manifest.tau_set, config.train.seed);
    const std::string csv = training::sweep_csv(rows);
    write_text(report / "sweep.csv", csv);
    os << "sweep " << (report / "sweep.csv").string() << "\n" << csv;
  }
  return os.str();
}

}  // namespace cfjam::cli
