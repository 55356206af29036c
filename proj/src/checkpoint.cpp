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
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cfjam/error.hpp"
#include "cfjam/neural.hpp"
#include "cfjam/text.hpp"

namespace cfjam::neural {

namespace {

std::string config_line(const ModelConfig& c) {
  std::ostringstream os;
  os << "config hidden_dim " << c.hidden_dim << " gcn_layers " << c.gcn_layers << " gcn_prop_steps "
     << c.gcn_prop_steps << " encoder_layers " << c.encoder_layers << " attention_heads " << c.attention_heads
     << " ffn_dim " << c.ffn_dim << " classifier_hidden " << c.classifier_hidden << " dropout_attn "
     << text::format_double(c.dropout_attn) << " dropout_global " << text::format_double(c.dropout_global)
     << " n_steps " << c.n_steps << " node_feature_dim " << c.node_feature_dim << " edge_feature_dim "
     << c.edge_feature_dim << " area_side " << text::format_double(c.area_side) << " head_norm "
     << head_norm_name(c.head_norm);
  return os.str();
}

[[noreturn]] void bad(const std::string& field, const std::string& detail) { throw SchemaError(field, detail); }

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::string out;
  out += std::string("schema ") + kCheckpointSchema + "\n";
  out += config_line(checkpoint.config) + "\n";
  out += "dataset_digest " + (checkpoint.dataset_digest.empty() ? std::string("-") : checkpoint.dataset_digest) + "\n";
  out += "decision_threshold " + text::format_double(checkpoint.decision_threshold) + "\n";
  std::size_t count = 0;
  checkpoint.params.for_each([&count](const std::string&, const Mat&) { ++count; });
  out += "tensors " + std::to_string(count) + "\n";
  checkpoint.params.for_each([&out](const std::string& name, const Mat& m) {
    out += "tensor " + name + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      if (i > 0) out += ' ';
      out += text::format_double(m.data()[i]);
    }
    out += '\n';
  });
  out += "end\n";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot open checkpoint '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorCode::Io, "write to checkpoint '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) fail(ErrorCode::NotFound, "checkpoint not found at '" + path + "'");
  probe.close();
  const std::string body = text::read_file(path);
  std::istringstream in(body);
  std::string line;
  auto next = [&](const std::string& field) {
    do {
      if (!std::getline(in, line)) bad(field, "unexpected end of checkpoint (truncated?)");
    } while (text::trim(line).empty());
    return text::split_ws(line);
  };
  auto integer = [](const std::string& field, std::string_view tok) {
    long long v = 0;
    if (!text::parse_int(tok, v)) bad(field, "'" + std::string(tok) + "' is not an integer");
    return static_cast<int>(v);
  };
  auto real = [](const std::string& field, std::string_view tok) {
    double v = 0.0;
    if (!text::parse_double(tok, v)) bad(field, "'" + std::string(tok) + "' is not a number");
    return v;
  };

  auto t = next("schema");
  if (t.size() != 2 || t[0] != "schema") bad("schema", "missing schema line");
  if (t[1] != kCheckpointSchema) bad("schema", "unsupported checkpoint schema '" + std::string(t[1]) + "'");

  Checkpoint ck;
  t = next("config");
  if (t.empty() || t[0] != "config" || t.size() % 2 != 1) bad("config", "malformed config line");
  std::map<std::string, std::string_view> kv;
  for (std::size_t i = 1; i + 1 < t.size(); i += 2) kv[std::string(t[i])] = t[i + 1];
  auto get = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) bad(std::string("config.") + key, "missing");
    return it->second;
  };
  auto& c = ck.config;
  c.hidden_dim = integer("config.hidden_dim", get("hidden_dim"));
  c.gcn_layers = integer("config.gcn_layers", get("gcn_layers"));
  c.gcn_prop_steps = integer("config.gcn_prop_steps", get("gcn_prop_steps"));
  c.encoder_layers = integer("config.encoder_layers", get("encoder_layers"));
  c.attention_heads = integer("config.attention_heads", get("attention_heads"));
  c.ffn_dim = integer("config.ffn_dim", get("ffn_dim"));
  c.classifier_hidden = integer("config.classifier_hidden", get("classifier_hidden"));
  c.dropout_attn = real("config.dropout_attn", get("dropout_attn"));
  c.dropout_global = real("config.dropout_global", get("dropout_global"));
  c.n_steps = integer("config.n_steps", get("n_steps"));
  c.node_feature_dim = integer("config.node_feature_dim", get("node_feature_dim"));
  c.edge_feature_dim = integer("config.edge_feature_dim", get("edge_feature_dim"));
  c.area_side = real("config.area_side", get("area_side"));
  try {
    c.head_norm = parse_head_norm(std::string(get("head_norm")), "config.head_norm");
    c.validate();
  } catch (const Error& e) {
    bad("config", e.what());
  }

  t = next("dataset_digest");
  if (t.size() != 2 || t[0] != "dataset_digest") bad("dataset_digest", "malformed line");
  ck.dataset_digest = t[1] == "-" ? std::string() : std::string(t[1]);
  t = next("decision_threshold");
  if (t.size() != 2 || t[0] != "decision_threshold") bad("decision_threshold", "malformed line");
  ck.decision_threshold = real("decision_threshold", t[1]);

  t = next("tensors");
  if (t.size() != 2 || t[0] != "tensors") bad("tensors", "malformed line");
  const int count = integer("tensors", t[1]);

  ck.params = ModelParams::zeros(c);
  std::map<std::string, Mat*> slots;
  ck.params.for_each([&slots](const std::string& name, Mat& m) { slots[name] = &m; });
  if (count != static_cast<int>(slots.size())) {
    bad("tensors", "checkpoint holds " + std::to_string(count) + " tensors, config implies " +
                       std::to_string(slots.size()));
  }
  std::set<std::string> seen;
  for (int k = 0; k < count; ++k) {
    t = next("tensor");
    if (t.size() != 4 || t[0] != "tensor") bad("tensor", "malformed tensor header");
    const std::string name(t[1]);
    auto it = slots.find(name);
    if (it == slots.end()) bad("tensor." + name, "unknown tensor name");
    if (!seen.insert(name).second) bad("tensor." + name, "duplicate tensor");
    Mat& m = *it->second;
    const int rows = integer("tensor." + name, t[2]);
    const int cols = integer("tensor." + name, t[3]);
    if (rows != m.rows() || cols != m.cols()) {
      throw SchemaError("tensor." + name,
                        "shape " + std::to_string(rows) + "x" + std::to_string(cols) + " does not match expected " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()),
                        ErrorCode::ShapeMismatch);
    }
    const auto values = next("tensor." + name);
    if (static_cast<Eigen::Index>(values.size()) != m.size()) {
      bad("tensor." + name, "expected " + std::to_string(m.size()) + " values, found " +
                                std::to_string(values.size()));
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = real("tensor." + name, values[i]);
  }
  t = next("end");
  if (t.size() != 1 || t[0] != "end") bad("end", "missing end marker");
  return ck;
}

}  // namespace cfjam::neural
