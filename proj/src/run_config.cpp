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
#include "cfjam/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>
#include <sstream>

#include "cfjam/error.hpp"
#include "cfjam/text.hpp"

namespace cfjam::cli {

namespace {

using text::format_double;

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  fail(ErrorCode::Configuration, key + ": '" + value + "' is not " + expected);
}

double as_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  if (!text::parse_double(text::trim(v), out)) bad_value(key, v, "a number");
  return out;
}

long long as_int(const std::string& key, const std::string& v) {
  long long out = 0;
  if (!text::parse_int(text::trim(v), out)) bad_value(key, v, "an integer");
  return out;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::vector<Point> parse_points(const std::string& key, const std::string& v) {
  std::vector<Point> out;
  for (auto tok : text::split_ws(v)) {
    const auto comma = tok.find(',');
    if (comma == std::string_view::npos) bad_value(key, std::string(tok), "an x,y pair");
    double x = 0.0, y = 0.0;
    if (!text::parse_double(tok.substr(0, comma), x) || !text::parse_double(tok.substr(comma + 1), y)) {
      bad_value(key, std::string(tok), "an x,y pair");
    }
    out.push_back({x, y});
  }
  if (out.empty()) bad_value(key, v, "a list of x,y pairs");
  return out;
}

#define CFJAM_REAL(sec, name, field)                                                                  \
  Key {                                                                                               \
    sec, name, [](RunConfig& c, const std::string& v) { c.field = as_double(sec "." name, v); },     \
        [](const RunConfig& c) { return format_double(c.field); }                                     \
  }
#define CFJAM_INT(sec, name, field)                                                                   \
  Key {                                                                                               \
    sec, name, [](RunConfig& c, const std::string& v) { c.field = static_cast<decltype(c.field)>(as_int(sec "." name, v)); }, \
        [](const RunConfig& c) { return std::to_string(c.field); }                                    \
  }
#define CFJAM_TEXT(sec, name, field)                                                                  \
  Key {                                                                                               \
    sec, name, [](RunConfig& c, const std::string& v) { c.field = std::string(text::trim(v)); },      \
        [](const RunConfig& c) { return c.field; }                                                    \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      CFJAM_REAL("channel", "beta", scenario.channel.beta),
      CFJAM_REAL("channel", "d0", scenario.channel.d0),
      CFJAM_REAL("channel", "noise_power", scenario.channel.noise_power),
      CFJAM_INT("channel", "n_antennas", scenario.channel.n_antennas),
      CFJAM_REAL("channel", "jammer_power", scenario.channel.jammer_power),
      CFJAM_REAL("channel", "jammer_radius", scenario.channel.jammer_radius),

      CFJAM_REAL("mobility", "area_side", scenario.mobility.area_side),
      CFJAM_REAL("mobility", "v_max", scenario.mobility.v_max),
      Key{"mobility", "v_max_kmh",
          [](RunConfig& c, const std::string& v) {
            c.scenario.mobility.v_max = as_double("mobility.v_max_kmh", v) / 3.6;
          },
          nullptr},
      CFJAM_REAL("mobility", "sigma_w", scenario.mobility.sigma_w),
      CFJAM_REAL("mobility", "sample_time", scenario.mobility.sample_time),
      CFJAM_REAL("mobility", "d_min", scenario.mobility.d_min),
      Key{"mobility", "velocity_support",
          [](RunConfig& c, const std::string& v) {
            const auto t = text::trim(v);
            if (t == "signed") c.scenario.mobility.velocity_support = mobility::VelocitySupport::Signed;
            else if (t == "positive") c.scenario.mobility.velocity_support = mobility::VelocitySupport::Positive;
            else bad_value("mobility.velocity_support", v, "'signed' or 'positive'");
          },
          [](const RunConfig& c) {
            return std::string(c.scenario.mobility.velocity_support == mobility::VelocitySupport::Signed ? "signed"
                                                                                                         : "positive");
          }},

      Key{"topology", "ap_positions",
          [](RunConfig& c, const std::string& v) { c.scenario.ap_positions = parse_points("topology.ap_positions", v); },
          [](const RunConfig& c) {
            std::string out;
            for (const auto& p : c.scenario.ap_positions) {
              if (!out.empty()) out += ' ';
              out += format_double(p.x) + "," + format_double(p.y);
            }
            return out;
          }},
      CFJAM_REAL("topology", "threshold_db", scenario.threshold_db),

      CFJAM_INT("dataset", "n_ues", scenario.n_ues),
      CFJAM_REAL("dataset", "frame_duration", scenario.frame_duration),
      CFJAM_INT("dataset", "n_steps", scenario.n_steps),
      Key{"dataset", "burst_offset",
          [](RunConfig& c, const std::string& v) {
            const auto t = text::trim(v);
            if (t == "fixed") c.scenario.burst_offset = dataset::BurstOffset::Fixed;
            else if (t == "uniform-random") c.scenario.burst_offset = dataset::BurstOffset::UniformRandom;
            else bad_value("dataset.burst_offset", v, "'fixed' or 'uniform-random'");
          },
          [](const RunConfig& c) {
            return std::string(c.scenario.burst_offset == dataset::BurstOffset::Fixed ? "fixed" : "uniform-random");
          }},
      CFJAM_INT("dataset", "seed", scenario.seed),
      CFJAM_INT("dataset", "sequences", sequences),
      Key{"dataset", "tau_set",
          [](RunConfig& c, const std::string& v) { c.tau_set = parse_int_list(v, "dataset.tau_set"); },
          [](const RunConfig& c) { return join_ints(c.tau_set); }},
      CFJAM_TEXT("dataset", "dataset_dir", dataset_dir),

      CFJAM_INT("neural", "hidden_dim", model.hidden_dim),
      CFJAM_INT("neural", "gcn_layers", model.gcn_layers),
      CFJAM_INT("neural", "gcn_prop_steps", model.gcn_prop_steps),
      CFJAM_INT("neural", "encoder_layers", model.encoder_layers),
      CFJAM_INT("neural", "attention_heads", model.attention_heads),
      CFJAM_INT("neural", "ffn_dim", model.ffn_dim),
      CFJAM_INT("neural", "classifier_hidden", model.classifier_hidden),
      CFJAM_REAL("neural", "dropout_attn", model.dropout_attn),
      CFJAM_REAL("neural", "dropout_global", model.dropout_global),
      Key{"neural", "head_norm",
          [](RunConfig& c, const std::string& v) {
            c.model.head_norm = neural::parse_head_norm(std::string(text::trim(v)), "neural.head_norm");
          },
          [](const RunConfig& c) { return std::string(neural::head_norm_name(c.model.head_norm)); }},

      CFJAM_INT("training", "epochs", train.epochs),
      CFJAM_REAL("training", "learning_rate", train.learning_rate),
      CFJAM_REAL("training", "weight_decay", train.weight_decay),
      CFJAM_INT("training", "batch_size", train.batch_size),
      CFJAM_REAL("training", "adam_beta1", train.adam_beta1),
      CFJAM_REAL("training", "adam_beta2", train.adam_beta2),
      CFJAM_REAL("training", "adam_epsilon", train.adam_epsilon),
      CFJAM_INT("training", "early_stop_patience", train.early_stop_patience),
      CFJAM_INT("training", "seed", train.seed),
      CFJAM_REAL("training", "decision_threshold", train.decision_threshold),

      CFJAM_TEXT("cli", "checkpoint_path", checkpoint_path),
      CFJAM_TEXT("cli", "log_path", log_path),
      CFJAM_TEXT("cli", "report_path", report_path),
      CFJAM_INT("cli", "threads", threads),
  };
  return table;
}

#undef CFJAM_REAL
#undef CFJAM_INT
#undef CFJAM_TEXT

}  // namespace

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  std::string normalized = value;
  for (char& ch : normalized) {
    if (ch == ',') ch = ' ';
  }
  for (auto tok : text::split_ws(normalized)) {
    long long v = 0;
    if (!text::parse_int(tok, v)) bad_value(key, std::string(tok), "an integer");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) bad_value(key, value, "a non-empty integer list");
  return out;
}

void RunConfig::finalize() {
  model.n_steps = scenario.n_steps;
  model.area_side = scenario.area_side();
  train.threads = threads;
  validate();
}

void RunConfig::validate() const {
  scenario.validate();
  model.validate();
  train.validate();
  require(sequences >= 2, ErrorCode::Configuration, "dataset.sequences must be at least 2");
  require(threads >= 1, ErrorCode::Configuration, "cli.threads must be at least 1");
  const int spf = scenario.steps_per_frame();
  for (int tau : tau_set) {
    require(tau >= 1 && tau <= spf, ErrorCode::Configuration,
            "dataset.tau_set: " + std::to_string(tau) + " outside [1, " + std::to_string(spf) + "]");
  }
  require(!dataset_dir.empty(), ErrorCode::Configuration, "dataset.dataset_dir must not be empty");
  require(!checkpoint_path.empty(), ErrorCode::Configuration, "cli.checkpoint_path must not be empty");
}

void apply_setting(RunConfig& config, const std::string& section, const std::string& key, const std::string& value) {
  for (const auto& k : keys()) {
    if (section == k.section && key == k.name) {
      k.set(config, value);
      return;
    }
  }
  fail(ErrorCode::Configuration, "unknown configuration key '" + section + "." + key + "'");
}

void apply_ini(RunConfig& config, const std::string& ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::Configuration, std::string("config parse error: ") + e.message() + " (line " +
                                       std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) fail(ErrorCode::Configuration, "key '" + section + "' must appear inside a [section]");
    for (const auto& [key, node] : body) apply_setting(config, section, key, node.data());
  }
}

void apply_ini_file(RunConfig& config, const std::string& path) {
  std::string body;
  try {
    body = text::read_file(path);
  } catch (const Error&) {
    fail(ErrorCode::NotFound, "config file not found: '" + path + "'");
  }
  apply_ini(config, body);
}

std::string render_ini(const RunConfig& config) {
  std::string out;
  std::string current;
  for (const auto& k : keys()) {
    if (!k.get) continue;
    if (current != k.section) {
      if (!current.empty()) out += '\n';
      current = k.section;
      out += "[" + current + "]\n";
    }
    out += std::string(k.name) + " = " + k.get(config) + "\n";
  }
  return out;
}

}  // namespace cfjam::cli
