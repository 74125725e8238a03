// Copyright 2026 The SUQL Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace suql {

/// Stable machine-readable error classes. The string form is part of the
/// service wire format and the CLI exit-code mapping.
enum class ErrorCode {
  kParse,        // tokenizer / grammar errors, carries a position
  kUnsupported,  // recognized but unsupported construct (GROUP BY, ...)
  kBind,         // unknown table/column, type errors
  kSchema,       // DDL problems
  kData,         // row loading / coercion problems
  kCast,         // value cast failures
  kRuntime,      // evaluation problems (incomparable keys, ...)
  kBackend,      // free-text backend failures
  kAuth,         // backend rejected credentials
  kTransport,    // network / timeout after retries
  kIo,           // filesystem
  kNotFound,
  kBadRequest,
  kIntegrity,    // fixture digest mismatch, corrupt index
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> position() const { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

}  // namespace suql
