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
#include "cfjam/cfjam.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "cfjam/commands.hpp"
#include "cfjam/error.hpp"
#include "cfjam/run_config.hpp"

struct cfjam_config {
  cfjam::cli::RunConfig value;
};

struct cfjam_model {
  cfjam::neural::Checkpoint checkpoint;
};

struct cfjam_sequence {
  cfjam::dataset::GraphSequence value;
};

namespace {

thread_local std::string last_error;

cfjam_status to_status(cfjam::ErrorCode code) { return static_cast<cfjam_status>(static_cast<int>(code)); }

template <typename Fn>
cfjam_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return CFJAM_OK;
  } catch (const cfjam::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CFJAM_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CFJAM_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CFJAM_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  cfjam::require(p != nullptr, cfjam::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cfjam::cli::LineSink sink(cfjam_line_fn fn, void* user) {
  if (fn == nullptr) return {};
  return [fn, user](const std::string& line) { fn(line.c_str(), user); };
}

template <typename Cmd>
cfjam_status run(const cfjam_config* config, const char* out_dir, cfjam::cli::Command which, char** report,
                 Cmd&& cmd) {
  return guarded([&] {
    need(config, "config");
    cfjam::cli::RunConfig rc = config->value;
    if (out_dir != nullptr) cfjam::cli::apply_out_dir(rc, which, out_dir);
    const std::string text = cmd(rc);
    if (report != nullptr) *report = dup_string(text);
  });
}

}  // namespace

extern "C" {

const char* cfjam_version(void) { return "1.0.0"; }

const char* cfjam_last_error(void) { return last_error.c_str(); }

const char* cfjam_status_name(cfjam_status status) {
  switch (status) {
    case CFJAM_OK: return "ok";
    case CFJAM_E_INVALID_ARGUMENT: return "invalid argument";
    case CFJAM_E_INVALID_GEOMETRY: return "invalid geometry";
    case CFJAM_E_CONFIGURATION: return "configuration error";
    case CFJAM_E_IO: return "i/o error";
    case CFJAM_E_SCHEMA: return "schema violation";
    case CFJAM_E_LENGTH_MISMATCH: return "length mismatch";
    case CFJAM_E_SHAPE_MISMATCH: return "shape mismatch";
    case CFJAM_E_NOT_FOUND: return "not found";
    case CFJAM_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void cfjam_string_free(char* s) { std::free(s); }

cfjam_status cfjam_config_create(cfjam_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cfjam_config{};
  });
}

void cfjam_config_destroy(cfjam_config* config) { delete config; }

cfjam_status cfjam_config_load(cfjam_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    cfjam::cli::apply_ini_file(config->value, path);
  });
}

cfjam_status cfjam_config_set(cfjam_config* config, const char* section, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(section, "section");
    need(key, "key");
    need(value, "value");
    cfjam::cli::apply_setting(config->value, section, key, value);
  });
}

cfjam_status cfjam_config_to_string(const cfjam_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = dup_string(cfjam::cli::render_ini(config->value));
  });
}

cfjam_status cfjam_generate(const cfjam_config* config, const char* out_dir, cfjam_line_fn progress, void* user,
                            char** report) {
  return run(config, out_dir, cfjam::cli::Command::Generate, report,
             [&](const cfjam::cli::RunConfig& rc) { return cfjam::cli::cmd_generate(rc, sink(progress, user)); });
}

cfjam_status cfjam_train(const cfjam_config* config, const char* out_dir, cfjam_line_fn progress, void* user,
                         char** report) {
  return run(config, out_dir, cfjam::cli::Command::Train, report,
             [&](const cfjam::cli::RunConfig& rc) { return cfjam::cli::cmd_train(rc, sink(progress, user)); });
}

cfjam_status cfjam_eval(const cfjam_config* config, const char* out_dir, int sweep_tau, cfjam_line_fn progress,
                        void* user, char** report) {
  return run(config, out_dir, cfjam::cli::Command::Eval, report, [&](const cfjam::cli::RunConfig& rc) {
    return cfjam::cli::cmd_eval(rc, sweep_tau != 0, sink(progress, user));
  });
}

cfjam_status cfjam_model_load(const char* path, cfjam_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new cfjam_model{cfjam::neural::load_checkpoint(path)};
  });
}

void cfjam_model_destroy(cfjam_model* model) { delete model; }

cfjam_status cfjam_model_parameter_count(const cfjam_model* model, size_t* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = model->checkpoint.params.parameter_count();
  });
}

cfjam_status cfjam_sequence_load(const char* path, cfjam_sequence** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new cfjam_sequence{cfjam::dataset::load_sequence(path)};
  });
}

void cfjam_sequence_destroy(cfjam_sequence* sequence) { delete sequence; }

cfjam_status cfjam_sequence_info(const cfjam_sequence* sequence, int* label, int* tau, int* n_steps) {
  return guarded([&] {
    need(sequence, "sequence");
    if (label != nullptr) *label = sequence->value.label;
    if (tau != nullptr) *tau = sequence->value.tau;
    if (n_steps != nullptr) *n_steps = sequence->value.n_steps();
  });
}

cfjam_status cfjam_predict(const cfjam_model* model, const cfjam_sequence* sequence, double* p_jammed) {
  return guarded([&] {
    need(model, "model");
    need(sequence, "sequence");
    need(p_jammed, "p_jammed");
    const auto& ck = model->checkpoint;
    cfjam::RandomStream unused(0);
    const auto probs = cfjam::neural::forward(sequence->value, ck.params, ck.config, false, unused);
    *p_jammed = probs(0, cfjam::neural::kClassJammed);
  });
}

}  // extern "C"
