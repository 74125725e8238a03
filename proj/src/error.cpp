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

#include "suql/error.hpp"

#include <openssl/sha.h>

#include <cstdio>

#include "suql/strings.hpp"

namespace suql {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kBind: return "bind_error";
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kData: return "data_error";
    case ErrorCode::kCast: return "cast_error";
    case ErrorCode::kRuntime: return "runtime_error";
    case ErrorCode::kBackend: return "backend_error";
    case ErrorCode::kAuth: return "auth_error";
    case ErrorCode::kTransport: return "transport_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kBadRequest: return "bad_request";
    case ErrorCode::kIntegrity: return "integrity_error";
  }
  return "unknown";
}

bool ilike_match(std::string_view text, std::string_view pattern) {
  // Iterative wildcard match with single-star backtracking.
  std::size_t t = 0, p = 0;
  std::size_t star = std::string_view::npos, mark = 0;
  auto eq = [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  };
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '_' || (pattern[p] != '%' && eq(pattern[p], text[t])))) {
      ++t;
      ++p;
    } else if (p < pattern.size() && pattern[p] == '%') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  char buf[3];
  for (unsigned char b : digest) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

}  // namespace suql
