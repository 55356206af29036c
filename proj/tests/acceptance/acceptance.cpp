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
// Acceptance run: prints one PASS/FAIL line per criterion.
//
//   cfjam_acceptance --workdir DIR --cli PATH [--lib PATH] [--only 1,2,...] [--threads N]
//
// Criteria 1-6 are properties of the implementation and decide the exit status. Criteria 7-10 train
// full-size detectors through the CLI; their lines report measured values against the published floors
// and do not change the exit status (see README, "Acceptance").
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfjam/channel.hpp"
#include "cfjam/dataset.hpp"
#include "cfjam/random.hpp"
#include "cfjam/text.hpp"
#include "cfjam/training.hpp"
#include "gradcheck.hpp"

namespace fs = std::filesystem;
using namespace cfjam;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// ---- 1: SINR against a direct evaluation ----------------------------------------------------

/// Written out from the definition with explicit loops: ||h||^4 / (noise + p_j + sum |h^H g|^2).
double brute_force_sinr(const std::vector<std::complex<double>>& h,
                        const std::vector<std::vector<std::complex<double>>>& others, double noise, double p_j) {
  double norm2 = 0.0;
  for (const auto& x : h) norm2 += x.real() * x.real() + x.imag() * x.imag();
  double interference = 0.0;
  for (const auto& g : others) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      // conj(h_k) * g_k
      re += h[k].real() * g[k].real() + h[k].imag() * g[k].imag();
      im += h[k].real() * g[k].imag() - h[k].imag() * g[k].real();
    }
    interference += re * re + im * im;
  }
  return norm2 * norm2 / (noise + p_j + interference);
}

Outcome criterion_sinr() {
  RandomStream rng(101);
  double worst = 0.0;
  bool monotone = true;
  for (int instance = 0; instance < 100; ++instance) {
    const int n_antennas = 1 + static_cast<int>(rng.next() % 8);
    const int n_interferers = static_cast<int>(rng.next() % 5);
    const double noise = std::pow(10.0, rng.uniform(-4.0, 0.0));
    const double p_j = std::pow(10.0, rng.uniform(-3.0, 2.0));
    auto draw = [&] {
      std::vector<std::complex<double>> v(static_cast<std::size_t>(n_antennas));
      for (auto& x : v) x = {rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
      return v;
    };
    const auto h = draw();
    std::vector<std::vector<std::complex<double>>> others;
    std::vector<channel::ChannelVector> interferers;
    for (int i = 0; i < n_interferers; ++i) {
      others.push_back(draw());
      interferers.emplace_back(others.back());
    }
    const channel::ChannelVector serving(h);
    const double clean = channel::sinr(serving, interferers, noise);
    const double jammed = channel::sinr_jammed(serving, interferers, noise, p_j);
    const double oracle_clean = brute_force_sinr(h, others, noise, 0.0);
    const double oracle_jammed = brute_force_sinr(h, others, noise, p_j);
    worst = std::max({worst, std::abs(clean - oracle_clean) / oracle_clean,
                      std::abs(jammed - oracle_jammed) / oracle_jammed});
    if (!(jammed < clean)) monotone = false;
  }
  return {worst < 1e-12 && monotone,
          "max relative error " + fmt(worst) + ", jamming lowers SINR on all instances: " + (monotone ? "yes" : "no")};
}

// ---- 2: gradient checks -------------------------------------------------------------------

Outcome criterion_gradients() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t tensors = 0;
  for (std::uint64_t point : {1001u, 1002u, 1003u}) {
    for (const auto& checks : {testkit::check_layers(point), testkit::check_model_small(point),
                               testkit::check_model_directional(point)}) {
      worst = std::max(worst, testkit::worst(checks));
      tensors += checks.size();
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < testkit::kGradTolerance && elapsed < 300.0,
          std::to_string(tensors) + " tensors at 3 points, max relative error " + fmt(worst) + ", " +
              fmt(elapsed, 3) + " s"};
}

// ---- 3: graph invariants ------------------------------------------------------------------

Outcome criterion_graphs() {
  dataset::ScenarioConfig sc;
  sc.n_steps = 40;
  sc.tau = 5;
  int snapshots = 0;
  long edges = 0;
  std::string failure;
  for (int pair = 0; pair < 25 && failure.empty(); ++pair) {
    sc.channel.beta = pair % 2 == 0 ? 1.0 : 0.0;
    RandomStream a(derive_seed(303, static_cast<std::uint64_t>(pair)));
    RandomStream b(derive_seed(303, static_cast<std::uint64_t>(pair)));
    const auto jammed = dataset::generate_sequence(sc, true, a);
    const auto clean = dataset::generate_sequence(sc, false, b);
    for (int t = 0; t < sc.n_steps && failure.empty(); ++t) {
      for (const auto* snap : {&jammed.snapshots[t], &clean.snapshots[t]}) {
        ++snapshots;
        edges += static_cast<long>(snap->edges.size());
        std::map<int, int> incident;
        for (const auto& e : snap->edges) {
          if (!(e.sinr_db > sc.threshold_db)) failure = "edge at or below threshold";
          ++incident[e.ap_id];
          ++incident[e.ue_id];
        }
        long degree_sum = 0;
        for (const auto& n : snap->nodes) {
          degree_sum += n.degree;
          if (n.degree != incident[n.id]) failure = "degree differs from incident edge count";
        }
        if (degree_sum != 2 * static_cast<long>(snap->edges.size())) failure = "degree sum is not twice the edges";
      }
      std::set<std::pair<int, int>> clean_edges;
      for (const auto& e : clean.snapshots[t].edges) clean_edges.insert({e.ap_id, e.ue_id});
      for (const auto& e : jammed.snapshots[t].edges) {
        if (!clean_edges.count({e.ap_id, e.ue_id})) failure = "jammed edge missing from the clean twin";
      }
    }
  }
  return {failure.empty() && snapshots >= 1000,
          failure.empty() ? std::to_string(snapshots) + " snapshots, " + std::to_string(edges) + " edges"
                          : failure};
}

// ---- shared CLI plumbing ------------------------------------------------------------------

struct Env {
  fs::path workdir;
  std::string cli;
  std::string lib;
  int threads = 1;
};

/// Runs the CLI inside `dir` with relative paths so that resolved configurations do not depend on
/// the location of the run. Output goes to `dir`/<log>.
bool run_cli(const Env& env, const fs::path& dir, const std::string& args, const std::string& log) {
  fs::create_directories(dir);
  const std::string cmd = "cd '" + dir.string() + "' && CFJAM_THREADS=" + std::to_string(env.threads) + " '" +
                          env.cli + "' " + args + " >> '" + log + "' 2>&1";
  return std::system(cmd.c_str()) == 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Every regular file under `root`, relative path -> bytes.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return files;
}

// ---- 4: determinism -----------------------------------------------------------------------

Outcome criterion_determinism(const Env& env) {
  const fs::path base = env.workdir / "determinism";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    const fs::path dir = base / run;
    fs::create_directories(dir);
    std::ofstream(dir / "run.ini") << "[training]\nepochs = 4\n";
    const std::string common = "--config run.ini --seed 5 --tau-set 1,2";
    if (!run_cli(env, dir, "generate " + common + " --sequences 40 --out data", "cli.log") ||
        !run_cli(env, dir, "train " + common + " --dataset data --out model", "cli.log") ||
        !run_cli(env, dir, "eval " + common + " --dataset data --checkpoint model/model.ckpt --sweep-tau --out report",
                 "cli.log")) {
      return {false, std::string("CLI run ") + run + " failed, see " + (dir / "cli.log").string()};
    }
  }
  const auto a = tree(base / "a");
  const auto b = tree(base / "b");
  int compared = 0;
  for (const auto& [name, bytes] : a) {
    if (name == "cli.log") continue;
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) return {false, "differs: " + name};
    ++compared;
  }
  const bool same_set = a.size() == b.size();
  return {same_set && a.count("model/model.ckpt") && a.count("model/train.log"),
          std::to_string(compared) + " files byte-identical (dataset, checkpoint, training log, report)"};
}

// ---- 5: metrics ---------------------------------------------------------------------------

Outcome criterion_metrics() {
  int cases = 0;
  std::string failure;
  for (long tp = 0; tp <= 5; ++tp) {
    for (long tn = 0; tn <= 5; ++tn) {
      for (long fp = 0; fp <= 5; ++fp) {
        for (long fn = 0; fn <= 5; ++fn) {
          ++cases;
          const auto m = training::metrics_from_counts(tp, tn, fp, fn);
          const long n = tp + tn + fp + fn;
          // Accuracy and F1 compared as exact fractions through cross multiplication.
          const bool acc_ok = n == 0 ? m.accuracy() == 0.0 : std::abs(m.accuracy() * n - (tp + tn)) < 1e-12;
          const long f1_den = 2 * tp + fp + fn;
          const bool f1_ok = f1_den == 0 ? m.f1() == 1.0 : std::abs(m.f1() * f1_den - 2 * tp) < 1e-12;
          const bool zero_tp = !(tp == 0 && fp + fn > 0) || m.f1() == 0.0;
          const bool bounded = m.accuracy() >= 0.0 && m.accuracy() <= 1.0 && m.f1() >= 0.0 && m.f1() <= 1.0;
          if (!(acc_ok && f1_ok && zero_tp && bounded && m.total() == n)) {
            failure = "tp=" + std::to_string(tp) + " tn=" + std::to_string(tn) + " fp=" + std::to_string(fp) +
                      " fn=" + std::to_string(fn);
          }
        }
      }
    }
  }
  const auto a = training::metrics_from_counts(2, 0, 1, 1);
  const auto b = training::metrics_from_counts(8, 1, 0, 1);
  if (std::abs(a.f1() - 4.0 / 6.0) > 1e-15) failure = "tp=2 fp=1 fn=1 f1";
  if (std::abs(b.accuracy() - 0.9) > 1e-15) failure = "tp=8 tn=1 fn=1 accuracy";
  return {failure.empty(), failure.empty() ? std::to_string(cases) + " confusion matrices" : "mismatch at " + failure};
}

// ---- 6: overfit sanity ----------------------------------------------------------------------

Outcome criterion_overfit(int threads) {
  dataset::ScenarioConfig sc;
  sc.seed = 606;
  const auto plans = dataset::plan_dataset(20, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, sc.seed);
  std::vector<dataset::GraphSequence> seqs;
  for (const auto& p : plans) seqs.push_back(dataset::generate_planned(sc, p));
  const auto examples = training::make_examples(seqs, sc.area_side());

  neural::ModelConfig mc;
  training::TrainConfig tc;
  tc.epochs = 200;
  tc.early_stop_patience = 0;
  tc.seed = 606;
  tc.threads = threads;
  int reached = 0;
  const auto result = training::train(mc, tc, examples, examples, [&](const training::EpochRecord& r,
                                                                       const neural::ModelParams& params) {
    const auto ev = training::evaluate(params, mc, examples, tc.decision_threshold, threads);
    if (ev.metrics.accuracy() == 1.0) {
      reached = r.epoch;
      return false;
    }
    return true;
  });
  return {reached > 0, reached > 0 ? "training accuracy 1.0 after epoch " + std::to_string(reached)
                                   : "not reached in " + std::to_string(result.log.size()) + " epochs"};
}

// ---- 7-10: full pipelines -----------------------------------------------------------------

struct Row {
  double accuracy = 0.0;
  double f1 = 0.0;
};
using Sweep = std::map<int, Row>;

Sweep read_sweep(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  Sweep s;
  while (std::getline(in, line)) {
    std::istringstream is(line);
    std::string tau, acc, f1;
    std::getline(is, tau, ',');
    std::getline(is, acc, ',');
    std::getline(is, f1, ',');
    s[std::stoi(tau)] = {std::stod(acc), std::stod(f1)};
  }
  return s;
}

/// Identity of the build that produced a pipeline; a completed run is reused only by the same build.
std::string build_stamp(const Env& env, const std::string& commands) {
  std::string s = slurp(env.cli);
  if (!env.lib.empty()) s += slurp(env.lib);
  return text::hex64(text::fnv1a64(s)) + "\n" + commands;
}

struct Pipeline {
  std::string name;
  int seed = 1;
  double beta = 1.0;
  std::string tau_set;
  std::string eval_dataset;  // run whose test split is evaluated; empty = own
};

/// generate -> train -> eval --sweep-tau, returning the sweep table. Reuses a completed run of the same build.
bool run_pipeline(const Env& env, const Pipeline& p, Sweep& sweep, std::string& note) {
  const fs::path dir = env.workdir / p.name;
  const std::string eval_data = p.eval_dataset.empty() ? "data" : "../" + p.eval_dataset + "/data";
  const std::vector<std::string> steps = {
      "generate --seed " + std::to_string(p.seed) + " --beta " + fmt(p.beta) + " --tau-set " + p.tau_set +
          " --sequences 2200 --out data",
      "train --seed " + std::to_string(p.seed) + " --dataset data --out model",
      "eval --seed 1 --dataset " + eval_data + " --checkpoint model/model.ckpt --sweep-tau --out report"};
  const std::string stamp = build_stamp(env, std::accumulate(steps.begin(), steps.end(), std::string(),
                                                             [](std::string a, const std::string& b) {
                                                               return std::move(a) + b + "\n";
                                                             }));
  const fs::path stamp_file = dir / "complete";
  if (fs::exists(stamp_file) && slurp(stamp_file) == stamp && fs::exists(dir / "report/sweep.csv")) {
    sweep = read_sweep(dir / "report/sweep.csv");
    note = "reused " + dir.string();
    return true;
  }
  fs::remove_all(dir);
  const auto start = Clock::now();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    // The evaluation of a specialist reads another run's dataset, which must exist first.
    if (!run_cli(env, dir, steps[i], "cli.log")) {
      note = "step failed: " + steps[i] + " (see " + (dir / "cli.log").string() + ")";
      return false;
    }
  }
  std::ofstream(stamp_file, std::ios::binary) << stamp;
  sweep = read_sweep(dir / "report/sweep.csv");
  note = "ran in " + fmt(seconds_since(start) / 60.0, 3) + " min";
  return true;
}

std::string sweep_text(const Sweep& s) {
  std::ostringstream os;
  for (const auto& [tau, row] : s) os << (tau == s.begin()->first ? "" : " ") << tau << ":" << fmt(row.accuracy, 3);
  return os.str();
}

double mean_accuracy(const Sweep& s) {
  double sum = 0.0;
  for (const auto& [tau, row] : s) sum += row.accuracy;
  return s.empty() ? 0.0 : sum / static_cast<double>(s.size());
}

bool complete(const Sweep& s) {
  for (int tau = 1; tau <= 10; ++tau) {
    if (!s.count(tau)) return false;
  }
  return true;
}

Outcome criterion_det_mixed(const Sweep& s) {
  if (!complete(s)) return {false, "sweep incomplete"};
  bool ok = s.at(10).accuracy >= 0.95;
  double min_acc = 1.0;
  double min_f1 = 1.0;
  for (int tau = 1; tau <= 9; ++tau) {
    ok = ok && s.at(tau).accuracy >= 0.97 && s.at(tau).f1 >= 0.97;
    min_acc = std::min(min_acc, s.at(tau).accuracy);
    min_f1 = std::min(min_f1, s.at(tau).f1);
  }
  return {ok, "tau 1-9 min accuracy " + fmt(min_acc, 3) + " min f1 " + fmt(min_f1, 3) + ", tau 10 accuracy " +
                  fmt(s.at(10).accuracy, 3) + " [" + sweep_text(s) + "]"};
}

Outcome criterion_det_specialist(const Sweep& s) {
  if (!complete(s)) return {false, "sweep incomplete"};
  double min_acc = 1.0;
  for (int tau = 1; tau <= 9; ++tau) min_acc = std::min(min_acc, s.at(tau).accuracy);
  return {min_acc >= 0.95, "tau 1-9 min accuracy " + fmt(min_acc, 3) + " [" + sweep_text(s) + "]"};
}

Outcome criterion_fading_mixed(const Sweep& s) {
  if (!complete(s)) return {false, "sweep incomplete"};
  double min_acc = 1.0;
  for (const auto& [tau, row] : s) min_acc = std::min(min_acc, row.accuracy);
  const double gap = s.at(8).accuracy - s.at(1).accuracy;
  return {min_acc >= 0.65 && gap >= 0.05, "min accuracy " + fmt(min_acc, 3) + ", accuracy(8) - accuracy(1) = " +
                                              fmt(gap, 3) + " [" + sweep_text(s) + "]"};
}

Outcome criterion_fading_compare(const Sweep& mixed, const Sweep& specialist) {
  if (!complete(mixed) || !complete(specialist)) return {false, "sweep incomplete"};
  const double mm = mean_accuracy(mixed);
  const double sm = mean_accuracy(specialist);
  const bool ok = mm >= sm - 0.01 && mixed.at(1).accuracy > specialist.at(1).accuracy;
  return {ok, "mean accuracy mixed " + fmt(mm, 3) + " vs specialist " + fmt(sm, 3) + ", tau 1: " +
                  fmt(mixed.at(1).accuracy, 3) + " vs " + fmt(specialist.at(1).accuracy, 3) + " [specialist " +
                  sweep_text(specialist) + "]"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfjam acceptance criteria"};
  Env env;
  std::string workdir = "acceptance";
  std::vector<int> only;
  app.add_option("--workdir", workdir, "Scratch directory for CLI runs");
  app.add_option("--cli", env.cli, "Path to the cfjam executable")->required();
  app.add_option("--lib", env.lib, "Path to the cfjam shared library (part of the reuse stamp)");
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--threads", env.threads, "Worker threads")->envname("CFJAM_THREADS");
  CLI11_PARSE(app, argc, argv);
  env.workdir = fs::absolute(workdir);
  env.cli = fs::absolute(env.cli).string();
  if (!env.lib.empty()) env.lib = fs::absolute(env.lib).string();
  fs::create_directories(env.workdir);

  auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
  bool properties_ok = true;
  auto report = [&](int id, const std::string& title, const Outcome& o) {
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << title << ": " << o.detail
              << std::endl;
    if (id <= 6 && !o.pass) properties_ok = false;
  };

  if (wanted(1)) report(1, "SINR oracle equivalence", criterion_sinr());
  if (wanted(2)) report(2, "gradient checks", criterion_gradients());
  if (wanted(3)) report(3, "graph invariants", criterion_graphs());
  if (wanted(4)) report(4, "byte-reproducible generate and train", criterion_determinism(env));
  if (wanted(5)) report(5, "metric identities", criterion_metrics());
  if (wanted(6)) report(6, "overfit sanity", criterion_overfit(env.threads));

  const std::string all_tau = "1,2,3,4,5,6,7,8,9,10";
  const std::vector<Pipeline> pipelines = {
      {"deterministic-mixed", 1, 1.0, all_tau, ""},
      {"deterministic-specialist", 2, 1.0, "10", "deterministic-mixed"},
      {"fading-mixed", 1, 0.0, all_tau, ""},
      {"fading-specialist", 2, 0.0, "10", "fading-mixed"},
  };
  std::map<std::string, Sweep> sweeps;
  const std::map<std::string, std::vector<int>> used_by = {{"deterministic-mixed", {7, 8}},
                                                           {"deterministic-specialist", {8}},
                                                           {"fading-mixed", {9, 10}},
                                                           {"fading-specialist", {10}}};
  for (const auto& p : pipelines) {
    const auto& users = used_by.at(p.name);
    if (std::none_of(users.begin(), users.end(), wanted)) continue;
    std::string note;
    Sweep s;
    const bool ok = run_pipeline(env, p, s, note);
    std::cout << "pipeline " << p.name << (ok ? " ok: " : " failed: ") << note << std::endl;
    if (ok) sweeps[p.name] = s;
  }
  if (wanted(7)) report(7, "deterministic scenario, mixed-tau training", criterion_det_mixed(sweeps["deterministic-mixed"]));
  if (wanted(8)) {
    report(8, "deterministic scenario, tau=10 specialist", criterion_det_specialist(sweeps["deterministic-specialist"]));
  }
  if (wanted(9)) report(9, "fading scenario, mixed-tau training", criterion_fading_mixed(sweeps["fading-mixed"]));
  if (wanted(10)) {
    report(10, "fading scenario, specialist versus mixed",
           criterion_fading_compare(sweeps["fading-mixed"], sweeps["fading-specialist"]));
  }
  return properties_ok ? 0 : 1;
}
