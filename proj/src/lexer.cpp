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

#include "suql/lexer.hpp"

#include <cctype>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

bool Token::is_keyword(std::string_view kw) const { return type == TokenType::kIdent && iequals(text, kw); }

std::string_view token_type_name(TokenType t) {
  switch (t) {
    case TokenType::kIdent: return "identifier";
    case TokenType::kQuotedIdent: return "quoted identifier";
    case TokenType::kString: return "string";
    case TokenType::kInt: return "integer";
    case TokenType::kFloat: return "number";
    case TokenType::kLParen: return "'('";
    case TokenType::kRParen: return "')'";
    case TokenType::kLBracket: return "'['";
    case TokenType::kRBracket: return "']'";
    case TokenType::kComma: return "','";
    case TokenType::kSemi: return "';'";
    case TokenType::kDot: return "'.'";
    case TokenType::kStar: return "'*'";
    case TokenType::kPlus: return "'+'";
    case TokenType::kMinus: return "'-'";
    case TokenType::kSlash: return "'/'";
    case TokenType::kEq: return "'='";
    case TokenType::kNe: return "'!='";
    case TokenType::kLt: return "'<'";
    case TokenType::kLe: return "'<='";
    case TokenType::kGt: return "'>'";
    case TokenType::kGe: return "'>='";
    case TokenType::kCast: return "'::'";
    case TokenType::kContains: return "'@>'";
    case TokenType::kEnd: return "end of input";
  }
  return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto push = [&](TokenType type, std::string s, std::size_t pos) { out.push_back({type, std::move(s), pos}); };

  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && text[i + 1] == '-') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '\'' || c == '"') {
      const char quote = c;
      std::string payload;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == quote) {
          if (i + 1 < n && text[i + 1] == quote) {
            payload += quote;
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        payload += text[i++];
      }
      if (!closed)
        throw Error(ErrorCode::kParse,
                    quote == '\'' ? "unterminated string literal" : "unterminated quoted identifier", start);
      push(quote == '\'' ? TokenType::kString : TokenType::kQuotedIdent, std::move(payload), start);
      continue;
    }
    if (ident_start(c)) {
      while (i < n && ident_char(text[i])) ++i;
      push(TokenType::kIdent, std::string(text.substr(start, i - start)), start);
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < n && digit(text[i + 1]))) {
      bool is_float = false;
      while (i < n && digit(text[i])) ++i;
      if (i < n && text[i] == '.' && !(i + 1 < n && text[i + 1] == '.')) {
        is_float = true;
        ++i;
        while (i < n && digit(text[i])) ++i;
      }
      if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < n && digit(text[j])) {
          is_float = true;
          i = j;
          while (i < n && digit(text[i])) ++i;
        }
      }
      push(is_float ? TokenType::kFloat : TokenType::kInt, std::string(text.substr(start, i - start)), start);
      continue;
    }
    auto two = [&](char next) { return i + 1 < n && text[i + 1] == next; };
    switch (c) {
      case '(': push(TokenType::kLParen, "(", start); ++i; break;
      case ')': push(TokenType::kRParen, ")", start); ++i; break;
      case '[': push(TokenType::kLBracket, "[", start); ++i; break;
      case ']': push(TokenType::kRBracket, "]", start); ++i; break;
      case ',': push(TokenType::kComma, ",", start); ++i; break;
      case ';': push(TokenType::kSemi, ";", start); ++i; break;
      case '.': push(TokenType::kDot, ".", start); ++i; break;
      case '*': push(TokenType::kStar, "*", start); ++i; break;
      case '+': push(TokenType::kPlus, "+", start); ++i; break;
      case '-': push(TokenType::kMinus, "-", start); ++i; break;
      case '/': push(TokenType::kSlash, "/", start); ++i; break;
      case '=': push(TokenType::kEq, "=", start); ++i; break;
      case '!':
        if (!two('=')) throw Error(ErrorCode::kParse, "illegal character '!'", start);
        push(TokenType::kNe, "!=", start);
        i += 2;
        break;
      case '<':
        if (two('=')) { push(TokenType::kLe, "<=", start); i += 2; }
        else if (two('>')) { push(TokenType::kNe, "<>", start); i += 2; }
        else { push(TokenType::kLt, "<", start); ++i; }
        break;
      case '>':
        if (two('=')) { push(TokenType::kGe, ">=", start); i += 2; }
        else { push(TokenType::kGt, ">", start); ++i; }
        break;
      case ':':
        if (!two(':')) throw Error(ErrorCode::kParse, "illegal character ':'", start);
        push(TokenType::kCast, "::", start);
        i += 2;
        break;
      case '@':
        if (!two('>')) throw Error(ErrorCode::kParse, "illegal character '@'", start);
        push(TokenType::kContains, "@>", start);
        i += 2;
        break;
      default: {
        std::string shown;
        if (static_cast<unsigned char>(c) < 0x80) {
          shown = std::string(1, c);
        } else {
          // Show the whole UTF-8 sequence.
          std::size_t j = i + 1;
          while (j < n && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) ++j;
          shown = std::string(text.substr(i, j - i));
        }
        throw Error(ErrorCode::kParse, "illegal character '" + shown + "'", start);
      }
    }
  }
  out.push_back({TokenType::kEnd, "", n});
  return out;
}

}  // namespace suql
