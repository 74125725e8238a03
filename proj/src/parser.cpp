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

#include "suql/parser.hpp"

#include <charconv>

#include "suql/catalog.hpp"
#include "suql/error.hpp"
#include "suql/lexer.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace {

/// Recursive-descent parser over the token list. Predicates in parentheses
/// are ambiguous with parenthesized expressions, so `(` tries the predicate
/// reading first and rewinds on failure.
class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Statement parse_statement() {
    Statement stmt;
    if (peek().is_keyword("EXPLAIN")) {
      ++pos_;
      stmt.explain = true;
      if (peek().is_keyword("ANALYZE")) {
        ++pos_;
        stmt.analyze = true;
      }
    }
    stmt.query = parse_select();
    if (peek().type == TokenType::kSemi) ++pos_;
    if (peek().type != TokenType::kEnd) {
      check_unsupported_tail();
      fail("unexpected " + describe(peek()) + " after end of query");
    }
    return stmt;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (t.type != TokenType::kEnd) ++pos_;
    return t;
  }

  static std::string describe(const Token& t) {
    switch (t.type) {
      case TokenType::kIdent: return "'" + t.text + "'";
      case TokenType::kQuotedIdent: return "identifier \"" + t.text + "\"";
      case TokenType::kString: return "string '" + t.text + "'";
      case TokenType::kInt:
      case TokenType::kFloat: return "number " + t.text;
      default: return std::string(token_type_name(t.type));
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }

  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw Error(ErrorCode::kParse, "syntax error at position " + std::to_string(t.pos) + ": " + msg, t.pos);
  }

  [[noreturn]] void unsupported(const std::string& construct) const {
    throw Error(ErrorCode::kUnsupported,
                "unsupported construct " + construct + " at position " + std::to_string(peek().pos), peek().pos);
  }

  void expect(TokenType type, std::string_view context) {
    if (peek().type != type)
      fail("expected " + std::string(token_type_name(type)) + " " + std::string(context) + ", found " +
           describe(peek()));
    ++pos_;
  }

  void expect_keyword(std::string_view kw) {
    if (!peek().is_keyword(kw)) fail("expected " + std::string(kw) + ", found " + describe(peek()));
    ++pos_;
  }

  bool accept_keyword(std::string_view kw) {
    if (peek().is_keyword(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool is_reserved(const Token& t) const { return t.type == TokenType::kIdent && is_reserved_word(to_lower(t.text)); }

  bool at_identifier() const {
    return peek().type == TokenType::kQuotedIdent || (peek().type == TokenType::kIdent && !is_reserved(peek()));
  }

  std::string parse_identifier(std::string_view what) {
    const Token& t = peek();
    if (t.type == TokenType::kQuotedIdent) {
      ++pos_;
      return t.text;
    }
    if (t.type == TokenType::kIdent && !is_reserved(t)) {
      ++pos_;
      return to_lower(t.text);
    }
    fail("expected " + std::string(what) + ", found " + describe(t));
  }

  void check_unsupported_tail() const {
    const Token& t = peek();
    if (t.is_keyword("GROUP")) unsupported("GROUP BY");
    if (t.is_keyword("HAVING")) unsupported("HAVING");
    if (t.is_keyword("OFFSET")) unsupported("OFFSET");
    if (t.is_keyword("UNION") || t.is_keyword("INTERSECT") || t.is_keyword("EXCEPT")) unsupported("set operations");
    if (t.is_keyword("JOIN") || t.is_keyword("INNER") || t.is_keyword("LEFT") || t.is_keyword("RIGHT") ||
        t.is_keyword("CROSS"))
      unsupported("JOIN (use a comma-separated FROM list)");
    if (t.is_keyword("WINDOW") || t.is_keyword("OVER")) unsupported("window functions");
  }

  // --- statement --------------------------------------------------------------

  QueryAst parse_select() {
    if (peek().is_keyword("INSERT") || peek().is_keyword("UPDATE") || peek().is_keyword("DELETE") ||
        peek().is_keyword("CREATE") || peek().is_keyword("WITH"))
      unsupported(to_upper(peek().text));
    expect_keyword("SELECT");
    if (peek().is_keyword("DISTINCT")) unsupported("SELECT DISTINCT");
    QueryAst q;
    do {
      q.select.push_back(parse_select_item());
    } while (peek().type == TokenType::kComma && (++pos_, true));

    // FROM is optional: `SELECT 1` evaluates its list once.
    if (accept_keyword("FROM")) {
      do {
        if (q.from.size() == 2) unsupported("more than two FROM items");
        q.from.push_back(parse_from_item());
      } while (peek().type == TokenType::kComma && (++pos_, true));
    }
    check_unsupported_tail();

    if (accept_keyword("WHERE")) q.where = parse_or();
    check_unsupported_tail();

    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderItem item{parse_expr(), false};
        if (accept_keyword("DESC")) item.desc = true;
        else accept_keyword("ASC");
        if (peek().is_keyword("NULLS")) unsupported("NULLS FIRST/LAST");
        q.order_by.push_back(std::move(item));
      } while (peek().type == TokenType::kComma && (++pos_, true));
    }
    check_unsupported_tail();

    if (accept_keyword("LIMIT")) {
      const Token& t = peek();
      if (t.type != TokenType::kInt) fail("expected a positive integer after LIMIT, found " + describe(t));
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || v < 1) fail_at(t, "LIMIT must be a positive integer");
      ++pos_;
      q.limit = v;
    }
    check_unsupported_tail();
    return q;
  }

  SelectItem parse_select_item() {
    SelectItem item;
    if (peek().type == TokenType::kStar) {
      ++pos_;
      item.star = true;
      return item;
    }
    if ((peek().type == TokenType::kIdent || peek().type == TokenType::kQuotedIdent) &&
        peek(1).type == TokenType::kDot && peek(2).type == TokenType::kStar) {
      item.star = true;
      item.star_qualifier = parse_identifier("qualifier");
      pos_ += 2;
      return item;
    }
    item.expr = parse_expr();
    if (accept_keyword("AS")) {
      item.alias = parse_identifier("alias");
    } else if (at_identifier()) {
      item.alias = parse_identifier("alias");
    }
    return item;
  }

  FromItem parse_from_item() {
    FromItem item;
    if (peek().type == TokenType::kLParen) {
      if (peek(1).is_keyword("SELECT")) unsupported("subquery");
      fail("expected a table name, found '('");
    }
    if (peek().is_keyword("UNNEST") && peek(1).type == TokenType::kLParen) {
      pos_ += 2;
      item.unnest_arg = parse_expr();
      expect(TokenType::kRParen, "to close unnest(");
    } else if (peek().is_keyword("TABLE")) {
      // `FROM table`: the flag-bearer corpus names its table "table".
      item.table = to_lower(advance().text);
    } else {
      item.table = parse_identifier("table name");
    }
    if (accept_keyword("AS")) {
      item.alias = parse_identifier("alias");
    } else if (at_identifier()) {
      item.alias = parse_identifier("alias");
    }
    if (item.is_unnest() && item.alias.empty()) fail("unnest(...) needs an alias");
    return item;
  }

  // --- predicates -------------------------------------------------------------

  Predicate parse_or() {
    std::vector<Predicate> children;
    children.push_back(parse_and());
    while (accept_keyword("OR")) children.push_back(parse_and());
    if (children.size() == 1) return std::move(children.front());
    return make_or(std::move(children));
  }

  Predicate parse_and() {
    std::vector<Predicate> children;
    children.push_back(parse_not());
    while (accept_keyword("AND")) children.push_back(parse_not());
    if (children.size() == 1) return std::move(children.front());
    return make_and(std::move(children));
  }

  Predicate parse_not() {
    if (accept_keyword("NOT")) return make_not(parse_not());
    return parse_atom();
  }

  Predicate parse_atom() {
    if (peek().type == TokenType::kLParen && !peek(1).is_keyword("SELECT")) {
      std::size_t saved = pos_;
      try {
        ++pos_;
        Predicate inner = parse_or();
        expect(TokenType::kRParen, "to close predicate group");
        return inner;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kParse) throw;
        pos_ = saved;
      }
    }
    Expr lhs = parse_expr();
    const Token& op = peek();
    switch (op.type) {
      case TokenType::kEq:
        ++pos_;
        if (peek().is_keyword("ANY")) {
          ++pos_;
          expect(TokenType::kLParen, "after ANY");
          if (peek().is_keyword("SELECT")) unsupported("subquery");
          Expr column = parse_expr();
          expect(TokenType::kRParen, "to close ANY(");
          return Predicate{AnyEq{std::move(lhs), std::move(column)}};
        }
        return make_cmp(std::move(lhs), CmpOp::kEq, parse_expr());
      case TokenType::kNe: ++pos_; return make_cmp(std::move(lhs), CmpOp::kNe, parse_expr());
      case TokenType::kLt: ++pos_; return make_cmp(std::move(lhs), CmpOp::kLt, parse_expr());
      case TokenType::kLe: ++pos_; return make_cmp(std::move(lhs), CmpOp::kLe, parse_expr());
      case TokenType::kGt: ++pos_; return make_cmp(std::move(lhs), CmpOp::kGt, parse_expr());
      case TokenType::kGe: ++pos_; return make_cmp(std::move(lhs), CmpOp::kGe, parse_expr());
      case TokenType::kContains: {
        ++pos_;
        expect_keyword("ARRAY");
        expect(TokenType::kLBracket, "after ARRAY");
        std::vector<Expr> items = parse_expr_list(TokenType::kRBracket);
        expect(TokenType::kRBracket, "to close ARRAY[");
        return Predicate{ArrayContains{std::move(lhs), std::move(items)}};
      }
      default: break;
    }
    bool negate = false;
    if (op.is_keyword("NOT") && (peek(1).is_keyword("IN") || peek(1).is_keyword("ILIKE") || peek(1).is_keyword("LIKE"))) {
      ++pos_;
      negate = true;
    }
    Predicate result = [&]() -> Predicate {
      if (accept_keyword("ILIKE")) return make_cmp(std::move(lhs), CmpOp::kILike, parse_expr());
      if (peek().is_keyword("LIKE")) unsupported("LIKE (use ILIKE)");
      if (accept_keyword("IN")) {
        expect(TokenType::kLParen, "after IN");
        if (peek().is_keyword("SELECT")) unsupported("subquery");
        std::vector<Expr> items = parse_expr_list(TokenType::kRParen);
        expect(TokenType::kRParen, "to close IN list");
        if (items.empty()) fail("IN list is empty");
        return Predicate{InList{std::move(lhs), std::move(items)}};
      }
      if (peek().is_keyword("IS")) unsupported("IS [NOT] NULL");
      if (peek().is_keyword("BETWEEN")) unsupported("BETWEEN");
      fail("expected a comparison operator, found " + describe(peek()));
    }();
    return negate ? make_not(std::move(result)) : result;
  }

  std::vector<Expr> parse_expr_list(TokenType closer) {
    std::vector<Expr> items;
    if (peek().type == closer) return items;
    do {
      items.push_back(parse_expr());
    } while (peek().type == TokenType::kComma && (++pos_, true));
    return items;
  }

  // --- expressions ------------------------------------------------------------

  Expr parse_expr() {
    Expr lhs = parse_unary();
    while (peek().type == TokenType::kPlus || peek().type == TokenType::kMinus) {
      ArithOp op = advance().type == TokenType::kPlus ? ArithOp::kAdd : ArithOp::kSub;
      lhs = make_arith(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().type == TokenType::kMinus) {
      const Token& minus = advance();
      if (peek().type == TokenType::kInt || peek().type == TokenType::kFloat) {
        Expr lit = parse_number(true);
        return parse_postfix(std::move(lit));
      }
      (void)minus;
      return make_arith(ArithOp::kSub, make_literal(Value::integer(0)), parse_unary());
    }
    if (peek().type == TokenType::kPlus) {
      ++pos_;
      return parse_unary();
    }
    return parse_postfix(parse_primary());
  }

  Expr parse_postfix(Expr e) {
    while (peek().type == TokenType::kCast) {
      ++pos_;
      try {
        SemanticType t = parse_type_spec(tokens_, pos_);
        e = make_cast(std::move(e), std::move(t));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::kSchema) throw;
        throw Error(ErrorCode::kParse, std::string(err.what()), err.position());
      }
    }
    return e;
  }

  Expr parse_number(bool negative) {
    const Token& t = advance();
    std::string text = negative ? "-" + t.text : t.text;
    if (t.type == TokenType::kInt) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec == std::errc() && ptr == text.data() + text.size()) return make_literal(Value::integer(v));
      fail_at(t, "integer literal out of range");
    }
    double d = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc()) fail_at(t, "bad numeric literal");
    return make_literal(Value::floating(d));
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::kInt:
      case TokenType::kFloat: return parse_number(false);
      case TokenType::kString: ++pos_; return make_literal(Value::text(t.text));
      case TokenType::kLParen: {
        if (peek(1).is_keyword("SELECT")) unsupported("subquery");
        ++pos_;
        Expr inner = parse_expr();
        expect(TokenType::kRParen, "to close parenthesized expression");
        return inner;
      }
      case TokenType::kQuotedIdent: return parse_column_ref();
      case TokenType::kIdent: break;
      default: fail("expected an expression, found " + describe(t));
    }
    if (t.is_keyword("TRUE")) { ++pos_; return make_literal(Value::boolean(true)); }
    if (t.is_keyword("FALSE")) { ++pos_; return make_literal(Value::boolean(false)); }
    if (t.is_keyword("NULL")) { ++pos_; return make_literal(Value::null()); }
    if (t.is_keyword("CASE")) unsupported("CASE");
    if (t.is_keyword("ARRAY")) fail("ARRAY[...] is only supported on the right of @>");
    if (peek(1).type == TokenType::kLParen) return parse_call();
    if (is_reserved(t)) fail("expected an expression, found " + describe(t));
    return parse_column_ref();
  }

  Expr parse_column_ref() {
    std::string first = parse_identifier("column name");
    if (peek().type == TokenType::kDot) {
      ++pos_;
      std::string second = parse_identifier("column name");
      return make_column(std::move(second), std::move(first));
    }
    return make_column(std::move(first));
  }

  Expr parse_call() {
    const Token& name_tok = advance();
    std::string fn = to_lower(name_tok.text);
    expect(TokenType::kLParen, "after function name");
    if (fn == "answer") {
      Expr target = parse_expr();
      expect(TokenType::kComma, "between answer() arguments");
      const Token& q = peek();
      if (q.type != TokenType::kString || trim(q.text).empty())
        fail("answer() question must be a non-empty string literal");
      ++pos_;
      expect(TokenType::kRParen, "to close answer(");
      return make_answer(std::move(target), q.text);
    }
    if (fn == "summary") {
      Expr target = parse_expr();
      expect(TokenType::kRParen, "to close summary(");
      return make_summary(std::move(target));
    }
    static const std::pair<std::string_view, AggFn> kAggs[] = {
        {"max", AggFn::kMax}, {"min", AggFn::kMin}, {"count", AggFn::kCount}, {"sum", AggFn::kSum}, {"avg", AggFn::kAvg}};
    for (const auto& [name, agg] : kAggs) {
      if (fn != name) continue;
      if (peek().is_keyword("DISTINCT")) unsupported("DISTINCT aggregates");
      if (agg == AggFn::kCount && peek().type == TokenType::kStar) {
        ++pos_;
        expect(TokenType::kRParen, "to close COUNT(*");
        return make_aggregate(agg, std::nullopt);
      }
      ++aggregate_depth_;
      Expr arg = parse_expr();
      --aggregate_depth_;
      if (aggregate_depth_ > 0) fail_at(name_tok, "aggregate functions cannot be nested");
      if (contains_aggregate(arg)) fail_at(name_tok, "aggregate functions cannot be nested");
      expect(TokenType::kRParen, "to close aggregate");
      return make_aggregate(agg, std::move(arg));
    }
    if (fn == "unnest") fail_at(name_tok, "unnest() is only supported as a FROM item");
    throw Error(ErrorCode::kUnsupported,
                "unsupported function '" + name_tok.text + "' at position " + std::to_string(name_tok.pos),
                name_tok.pos);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int aggregate_depth_ = 0;
};

}  // namespace

Statement parse_statement(std::string_view text) { return Parser(text).parse_statement(); }

QueryAst parse(std::string_view text) {
  Statement s = parse_statement(text);
  if (s.explain) throw Error(ErrorCode::kParse, "EXPLAIN is not a query; use parse_statement()", 0);
  return std::move(s.query);
}

}  // namespace suql
