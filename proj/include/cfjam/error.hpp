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

#include <stdexcept>
#include <string>

namespace cfjam {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  InvalidGeometry = 2,
  Configuration = 3,
  Io = 4,
  Schema = 5,
  LengthMismatch = 6,
  ShapeMismatch = 7,
  NotFound = 8,
  Internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a serialized file violates the schema; `field` names the offending entry.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& detail, ErrorCode code = ErrorCode::Schema)
      : Error(code, "schema violation at '" + field + "': " + detail), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace cfjam
