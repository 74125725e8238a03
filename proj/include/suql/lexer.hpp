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
#include <string>
#include <string_view>
#include <vector>

namespace suql {

enum class TokenType {
  kIdent,        // bare word; keywords are bare words checked by the parser
  kQuotedIdent,  // "Event year" (case preserved)
  kString,       // 'Jos''e' -> Jos'e
  kInt,
  kFloat,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kSemi,
  kDot,
  kStar,
  kPlus,
  kMinus,
  kSlash,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kCast,      // ::
  kContains,  // @>
  kEnd,
};

struct Token {
  TokenType type = TokenType::kEnd;
  std::string text;  // unescaped payload for strings / quoted identifiers, raw otherwise
  std::size_t pos = 0;

  bool is_keyword(std::string_view kw) const;
};

std::string_view token_type_name(TokenType t);

/// Splits SUQL text into tokens. The list always ends with a kEnd token
/// positioned at text.size(). Throws Error(kParse) on an unterminated
/// string or identifier and on characters outside the language.
std::vector<Token> tokenize(std::string_view text);

}  // namespace suql
