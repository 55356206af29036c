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
#include <string>
#include <string_view>

#include "cfjam/dataset.hpp"
#include "cfjam/error.hpp"
#include "cfjam/text.hpp"

namespace cfjam::dataset {

namespace {

using text::format_double;

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) fail(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

/// Line-oriented reader over a whole file; every accessor names the field it expects so that
/// malformed input reports which entry broke.
class Reader {
 public:
  Reader(std::string body, std::string origin) : body_(std::move(body)), origin_(std::move(origin)) {}

  bool at_end() const { return pos_ >= body_.size(); }

  /// Next non-empty line split into tokens; the first must equal `keyword`.
  std::vector<std::string_view> line(std::string_view keyword, std::size_t n_values) {
    auto tokens = next_tokens(keyword);
    if (tokens.front() != keyword) {
      throw SchemaError(std::string(keyword), where() + "expected '" + std::string(keyword) + "', found '" +
                                                  std::string(tokens.front()) + "'");
    }
    if (tokens.size() != n_values + 1) {
      throw SchemaError(std::string(keyword), where() + "expected " + std::to_string(n_values) + " value(s), found " +
                                                  std::to_string(tokens.size() - 1));
    }
    return tokens;
  }

  std::vector<std::string_view> peek_tokens() {
    const std::size_t saved = pos_;
    const int saved_line = line_no_;
    std::vector<std::string_view> tokens;
    while (!at_end() && tokens.empty()) tokens = text::split_ws(raw_line());
    pos_ = saved;
    line_no_ = saved_line;
    return tokens;
  }

  long long integer(std::string_view field, std::string_view token) {
    long long v = 0;
    if (!text::parse_int(token, v)) {
      throw SchemaError(std::string(field), where() + "'" + std::string(token) + "' is not an integer");
    }
    return v;
  }

  double real(std::string_view field, std::string_view token) {
    double v = 0.0;
    if (!text::parse_double(token, v)) {
      throw SchemaError(std::string(field), where() + "'" + std::string(token) + "' is not a number");
    }
    return v;
  }

  std::string where() const { return origin_ + ":" + std::to_string(line_no_) + ": "; }

 private:
  std::string_view raw_line() {
    const std::size_t end = body_.find('\n', pos_);
    const std::size_t stop = end == std::string::npos ? body_.size() : end;
    std::string_view l(body_.data() + pos_, stop - pos_);
    pos_ = end == std::string::npos ? body_.size() : end + 1;
    ++line_no_;
    return l;
  }

  std::vector<std::string_view> next_tokens(std::string_view expected) {
    std::vector<std::string_view> tokens;
    while (!at_end() && tokens.empty()) tokens = text::split_ws(raw_line());
    if (tokens.empty()) {
      throw SchemaError(std::string(expected), where() + "unexpected end of file (truncated?)");
    }
    return tokens;
  }

  std::string body_;
  std::string origin_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

void expect_header(Reader& r, std::string_view kind) {
  const auto schema = r.line("schema", 1);
  if (schema[1] != kSchemaVersion) {
    throw SchemaError("schema", r.where() + "unsupported schema '" + std::string(schema[1]) + "', expected " +
                                    kSchemaVersion);
  }
  const auto k = r.line("kind", 1);
  if (k[1] != kind) {
    throw SchemaError("kind", r.where() + "expected kind '" + std::string(kind) + "', found '" + std::string(k[1]) +
                                  "'");
  }
}

int bounded(Reader& r, std::string_view field, std::string_view token, long long lo, long long hi) {
  const long long v = r.integer(field, token);
  if (v < lo || v > hi) {
    throw SchemaError(std::string(field), r.where() + "value " + std::to_string(v) + " outside [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

}  // namespace

void save_sequence(const GraphSequence& seq, const std::filesystem::path& path) {
  require(!seq.snapshots.empty(), ErrorCode::InvalidArgument, "refusing to save an empty sequence");
  const auto& first = seq.snapshots.front();
  int n_aps = 0;
  for (const auto& n : first.nodes) n_aps += n.type == topology::NodeType::AP ? 1 : 0;
  const int n_ues = static_cast<int>(first.nodes.size()) - n_aps;

  std::string out;
  out.reserve(seq.snapshots.size() * (first.nodes.size() + 6) * 48);
  auto line = [&out](auto&&... parts) {
    bool first_part = true;
    ((out += (first_part ? "" : " "), out += parts, first_part = false), ...);
    out += '\n';
  };
  line("schema", kSchemaVersion);
  line("kind", "sequence");
  line("id", std::to_string(seq.id));
  line("config_digest", seq.config_digest.empty() ? std::string("-") : seq.config_digest);
  line("label", std::to_string(seq.label));
  line("tau", std::to_string(seq.tau));
  if (seq.jammer_position) {
    line("jammer", format_double(seq.jammer_position->x), format_double(seq.jammer_position->y));
  } else {
    line("jammer", "none");
  }
  line("n_aps", std::to_string(n_aps));
  line("n_ues", std::to_string(n_ues));
  line("n_steps", std::to_string(seq.snapshots.size()));
  for (const auto& snap : seq.snapshots) {
    line("snapshot", std::to_string(snap.time_index), "jammer_active", snap.jammer_active ? "1" : "0", "edges",
         std::to_string(snap.edges.size()));
    for (const auto& n : snap.nodes) {
      line("node", std::to_string(n.id), std::to_string(static_cast<int>(n.type)), format_double(n.position.x),
           format_double(n.position.y), std::to_string(n.degree));
    }
    for (const auto& e : snap.edges) {
      line("edge", std::to_string(e.ap_id), std::to_string(e.ue_id), format_double(e.distance),
           format_double(e.sinr_db), format_double(e.weight_distance), format_double(e.weight_sinr));
    }
  }
  line("end");
  write_file(path, out);
}

GraphSequence load_sequence(const std::filesystem::path& path) {
  Reader r(text::read_file(path.string()), path.filename().string());
  expect_header(r, "sequence");

  GraphSequence seq;
  seq.id = bounded(r, "id", r.line("id", 1)[1], 0, 1LL << 40);
  const auto digest = r.line("config_digest", 1)[1];
  seq.config_digest = digest == "-" ? std::string() : std::string(digest);
  seq.label = bounded(r, "label", r.line("label", 1)[1], 0, 1);
  seq.tau = bounded(r, "tau", r.line("tau", 1)[1], 0, 1 << 20);

  const auto jam = r.peek_tokens();
  if (jam.size() == 2 && jam[0] == "jammer" && jam[1] == "none") {
    r.line("jammer", 1);
  } else {
    const auto j = r.line("jammer", 2);
    seq.jammer_position = Point{r.real("jammer", j[1]), r.real("jammer", j[2])};
  }
  const int n_aps = bounded(r, "n_aps", r.line("n_aps", 1)[1], 1, 1 << 20);
  const int n_ues = bounded(r, "n_ues", r.line("n_ues", 1)[1], 0, 1 << 20);
  const int n_steps = bounded(r, "n_steps", r.line("n_steps", 1)[1], 1, 1 << 24);
  const int n_nodes = n_aps + n_ues;

  seq.snapshots.reserve(n_steps);
  while (true) {
    const auto head = r.peek_tokens();
    if (head.empty()) throw SchemaError("end", r.where() + "unexpected end of file (truncated?)");
    if (head[0] == "end") break;
    if (static_cast<int>(seq.snapshots.size()) == n_steps) {
      throw SchemaError("n_steps", r.where() + "more snapshots than the declared " + std::to_string(n_steps),
                        ErrorCode::LengthMismatch);
    }
    const auto s = r.line("snapshot", 5);
    if (s[2] != "jammer_active") throw SchemaError("snapshot.jammer_active", r.where() + "malformed snapshot header");
    if (s[4] != "edges") throw SchemaError("snapshot.edges", r.where() + "malformed snapshot header");
    topology::GraphSnapshot snap;
    snap.time_index = bounded(r, "snapshot.time_index", s[1], 0, 1LL << 30);
    snap.jammer_active = bounded(r, "snapshot.jammer_active", s[3], 0, 1) == 1;
    const int n_edges = bounded(r, "snapshot.edges", s[5], 0, static_cast<long long>(n_aps) * n_ues);

    snap.nodes.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const auto t = r.line("node", 5);
      auto& node = snap.nodes[i];
      node.id = bounded(r, "node.id", t[1], i, i);
      node.type = static_cast<topology::NodeType>(bounded(r, "node.type", t[2], 0, 1));
      if ((node.type == topology::NodeType::AP) != (i < n_aps)) {
        throw SchemaError("node.type", r.where() + "node " + std::to_string(i) + " has the wrong type");
      }
      node.position = {r.real("node.x", t[3]), r.real("node.y", t[4])};
      node.degree = bounded(r, "node.degree", t[5], 0, n_nodes);
    }
    std::vector<int> recount(n_nodes, 0);
    snap.edges.resize(n_edges);
    for (int i = 0; i < n_edges; ++i) {
      const auto t = r.line("edge", 6);
      auto& e = snap.edges[i];
      e.ap_id = bounded(r, "edge.ap_id", t[1], 0, n_aps - 1);
      e.ue_id = bounded(r, "edge.ue_id", t[2], n_aps, n_nodes - 1);
      e.distance = r.real("edge.distance", t[3]);
      e.sinr_db = r.real("edge.sinr_db", t[4]);
      e.weight_distance = r.real("edge.weight_distance", t[5]);
      e.weight_sinr = r.real("edge.weight_sinr", t[6]);
      ++recount[e.ap_id];
      ++recount[e.ue_id];
    }
    for (int i = 0; i < n_nodes; ++i) {
      if (recount[i] != snap.nodes[i].degree) {
        throw SchemaError("node.degree", r.where() + "node " + std::to_string(i) + " degree " +
                                             std::to_string(snap.nodes[i].degree) + " disagrees with " +
                                             std::to_string(recount[i]) + " incident edges");
      }
    }
    seq.snapshots.push_back(std::move(snap));
  }
  r.line("end", 0);
  if (static_cast<int>(seq.snapshots.size()) != n_steps) {
    throw SchemaError("n_steps", "file declares " + std::to_string(n_steps) + " snapshots but contains " +
                                     std::to_string(seq.snapshots.size()),
                      ErrorCode::LengthMismatch);
  }
  return seq;
}

GraphSequence load_sequence(const std::filesystem::path& path, int expected_steps) {
  GraphSequence seq = load_sequence(path);
  if (seq.n_steps() != expected_steps) {
    throw SchemaError("n_steps", path.filename().string() + " holds " + std::to_string(seq.n_steps()) +
                                     " snapshots but the manifest expects " + std::to_string(expected_steps),
                      ErrorCode::LengthMismatch);
  }
  return seq;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::string out;
  out += "schema " + std::string(kSchemaVersion) + "\n";
  out += "kind manifest\n";
  out += "config_digest " + (manifest.config_digest.empty() ? std::string("-") : manifest.config_digest) + "\n";
  out += "n_steps " + std::to_string(manifest.n_steps) + "\n";
  out += "tau_set";
  for (int t : manifest.tau_set) out += " " + std::to_string(t);
  out += "\ncount " + std::to_string(manifest.entries.size()) + "\n";
  for (const auto& e : manifest.entries) {
    out += "entry " + std::to_string(e.id) + " " + e.file + " " + std::to_string(e.label) + " " +
           std::to_string(e.tau) + " " + e.scenario + " " + split_name(e.split) + "\n";
  }
  out += "end\n";
  write_file(path, out);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::NotFound, "dataset manifest not found at '" + path.string() + "'");
  }
  Reader r(text::read_file(path.string()), path.filename().string());
  expect_header(r, "manifest");
  DatasetManifest m;
  const auto digest = r.line("config_digest", 1)[1];
  m.config_digest = digest == "-" ? std::string() : std::string(digest);
  m.n_steps = bounded(r, "n_steps", r.line("n_steps", 1)[1], 1, 1 << 24);
  const auto taus = r.peek_tokens();
  const auto t = r.line("tau_set", taus.empty() ? 0 : taus.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) m.tau_set.push_back(bounded(r, "tau_set", t[i], 0, 1 << 20));
  const int count = bounded(r, "count", r.line("count", 1)[1], 0, 1 << 30);
  m.entries.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto e = r.line("entry", 6);
    ManifestEntry entry;
    entry.id = bounded(r, "entry.id", e[1], 0, 1LL << 40);
    entry.file = std::string(e[2]);
    entry.label = bounded(r, "entry.label", e[3], 0, 1);
    entry.tau = bounded(r, "entry.tau", e[4], 0, 1 << 20);
    entry.scenario = std::string(e[5]);
    entry.split = parse_split(std::string(e[6]));
    m.entries.push_back(std::move(entry));
  }
  r.line("end", 0);
  return m;
}

}  // namespace cfjam::dataset
