// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <optional>

#include "funcanvas/syntax.hpp"

namespace funcanvas {

std::string_view spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::add:
      return "+";
    case BinaryOp::subtract:
      return "-";
    case BinaryOp::multiply:
      return "*";
    case BinaryOp::divide:
      return "/";
    case BinaryOp::overlay:
      return "&";
    case BinaryOp::less:
      return "<";
    case BinaryOp::lessEqual:
      return "<=";
    case BinaryOp::greater:
      return ">";
    case BinaryOp::greaterEqual:
      return ">=";
    case BinaryOp::equal:
      return "==";
    case BinaryOp::notEqual:
      return "/=";
  }
  return "?";
}

std::vector<ExprPtr> children(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> std::vector<ExprPtr> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Call>) {
          return n.args;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return {n.lhs, n.rhs};
        } else if constexpr (std::is_same_v<T, Negate>) {
          return {n.operand};
        } else if constexpr (std::is_same_v<T, ListLiteral> ||
                             std::is_same_v<T, TupleLiteral>) {
          return n.elements;
        } else if constexpr (std::is_same_v<T, Index>) {
          return {n.list, n.index};
        } else if constexpr (std::is_same_v<T, Paren>) {
          return {n.inner};
        } else {
          return {};
        }
      },
      expr.node);
}

ExprPtr makeExpr(Position position, ExprNode node) {
  auto expr = std::make_shared<Expr>();
  expr->position = position;
  expr->node = std::move(node);
  int deepest = 0;
  for (const auto& child : children(*expr)) {
    deepest = std::max(deepest, child->depth);
  }
  expr->depth = deepest + 1;
  return expr;
}

namespace {

struct ParseError {
  Diagnostic diagnostic;
};

const std::string kWhere = "where";

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  ParseResult run() {
    while (true) {
      skipNewlines();
      if (atEnd()) break;
      if (tokens_[pos_].kind == TokenKind::indent) {
        const Token& t = tokens_[pos_];
        result_.diagnostics.push_back(makeError(
            "unexpected-indentation",
            "a program must start with a definition in column 1",
            {t.position.line, t.layoutColumn}));
        recover();
        continue;
      }
      try {
        blocks_ = {1};
        result_.tree.definitions.push_back(parseDefinition());
        expectTerminator();
      } catch (const ParseError& e) {
        result_.diagnostics.push_back(e.diagnostic);
        recover();
      }
    }
    return std::move(result_);
  }

 private:
  bool atEnd() const { return pos_ >= tokens_.size(); }

  void skipNewlines() {
    while (!atEnd() && tokens_[pos_].kind == TokenKind::newline) ++pos_;
  }

  // Skip to the start of the next top-level definition.
  void recover() {
    while (!atEnd() && tokens_[pos_].kind != TokenKind::newline) ++pos_;
    defs_.clear();
  }

  int blockColumn() const { return blocks_.back(); }

  // Continuation lines deeper than the current block are transparent;
  // their columns are recorded on the clause being parsed.
  void skipContinuations() {
    while (!atEnd() && tokens_[pos_].kind == TokenKind::indent &&
           tokens_[pos_].layoutColumn > blockColumn()) {
      if (!defs_.empty()) {
        defs_.back()->continuationColumns.push_back(
            tokens_[pos_].layoutColumn);
      }
      ++pos_;
    }
  }

  // Next significant token, or null at a terminator (end of input, newline,
  // or a line at or left of the current block column).
  const Token* peek() {
    skipContinuations();
    if (atEnd()) return nullptr;
    const Token& t = tokens_[pos_];
    if (t.kind == TokenKind::newline || t.kind == TokenKind::indent) {
      return nullptr;
    }
    return &t;
  }

  bool peekIs(TokenKind kind) {
    const Token* t = peek();
    return t && t->kind == kind;
  }

  bool peekOp(std::string_view op) {
    const Token* t = peek();
    return t && t->kind == TokenKind::op && t->lexeme == op;
  }

  const Token& advance() { return tokens_[pos_++]; }

  // Position for "something is missing here" errors.
  Position terminatorPosition() const {
    if (!atEnd()) {
      const Token& t = tokens_[pos_];
      if (t.kind == TokenKind::indent) return {t.position.line, t.layoutColumn};
      return t.position;
    }
    if (tokens_.empty()) return {1, 1};
    const Token& last = tokens_.back();
    return {last.position.line,
            last.position.column + static_cast<int>(last.lexeme.size())};
  }

  [[noreturn]] void fail(std::string code, std::string message,
                         Position position) {
    throw ParseError{makeError(std::move(code), std::move(message), position)};
  }

  [[noreturn]] void unexpected(std::string_view expected) {
    const Token* t = peek();
    if (!t) {
      fail("unexpected-end-of-line",
           "expected " + std::string(expected) + " before the end of the line",
           terminatorPosition());
    }
    if (t->kind == TokenKind::closeParen || t->kind == TokenKind::closeBracket) {
      fail("unbalanced-brackets",
           "unmatched " + std::string(toString(t->kind)), t->position);
    }
    fail("unexpected-token",
         "expected " + std::string(expected) + " but found '" + t->lexeme +
             "'",
         t->position);
  }

  void expectTerminator() {
    if (peek()) unexpected("end of definition");
  }

  Definition parseDefinition() {
    const Token* head = peek();
    if (!head || head->kind != TokenKind::identifier) {
      unexpected("a definition name");
    }
    if (head->lexeme == kWhere) {
      fail("reserved-word", "'where' cannot be used as a name",
           head->position);
    }
    Definition def;
    def.name = head->lexeme;
    def.position = head->position;
    advance();
    defs_.push_back(&def);

    if (peekIs(TokenKind::openParen)) {
      Position open = advance().position;
      if (peekIs(TokenKind::closeParen)) {
        fail("empty-parameter-list",
             "a function needs at least one parameter", open);
      }
      while (true) {
        const Token* p = peek();
        if (!p) {
          fail("unbalanced-brackets", "missing ')' to close '('", open);
        }
        if (p->kind != TokenKind::identifier || p->lexeme == kWhere) {
          unexpected("a parameter name");
        }
        def.params.push_back({p->lexeme, p->position});
        advance();
        if (peekIs(TokenKind::comma)) {
          advance();
          continue;
        }
        if (peekIs(TokenKind::closeParen)) {
          advance();
          break;
        }
        if (!peek()) {
          fail("unbalanced-brackets", "missing ')' to close '('", open);
        }
        unexpected("',' or ')'");
      }
    }

    if (peekIs(TokenKind::vbar)) {
      advance();
      if (!peek() || peekIs(TokenKind::equals)) {
        fail("empty-guard", "expected a condition after '|'",
             peek() ? peek()->position : terminatorPosition());
      }
      def.guard = parseExpr();
    }

    if (!peekIs(TokenKind::equals)) {
      const Token* t = peek();
      fail("missing-equals",
           "expected '=' after the head of '" + def.name + "'",
           t ? t->position : terminatorPosition());
    }
    Position equals = advance().position;
    const Token* first = peek();
    if (!first || (first->kind == TokenKind::identifier &&
                   first->lexeme == kWhere)) {
      fail("empty-body", "definition of '" + def.name + "' has no body",
           equals);
    }
    def.body = parseExpr();

    const Token* next = peek();
    if (next && next->kind == TokenKind::identifier && next->lexeme == kWhere) {
      advance();
      parseWhereBlock(def);
    }
    defs_.pop_back();
    return def;
  }

  void parseWhereBlock(Definition& def) {
    int column;
    Position wherePos = tokens_[pos_ - 1].position;
    if (!atEnd() && tokens_[pos_].kind == TokenKind::indent &&
        tokens_[pos_].layoutColumn > blockColumn()) {
      column = tokens_[pos_].layoutColumn;
      def.continuationColumns.push_back(column);
      ++pos_;
    } else if (!atEnd() && tokens_[pos_].kind != TokenKind::newline &&
               tokens_[pos_].kind != TokenKind::indent) {
      column = tokens_[pos_].position.column;
    } else {
      fail("empty-where", "expected local definitions after 'where'",
           wherePos);
    }
    if (column <= blockColumn()) {
      fail("bad-indentation",
           "local definitions must be indented more than their parent",
           tokens_[pos_].position);
    }
    blocks_.push_back(column);
    while (true) {
      def.locals.push_back(parseDefinition());
      expectTerminator();
      if (atEnd() || tokens_[pos_].kind == TokenKind::newline) break;
      const Token& t = tokens_[pos_];  // an indent at or left of `column`
      if (t.layoutColumn == column) {
        def.continuationColumns.push_back(column);
        ++pos_;
        continue;
      }
      if (t.layoutColumn > blocks_[blocks_.size() - 2]) {
        fail("bad-indentation",
             "line is indented less than the local definitions above it",
             {t.position.line, t.layoutColumn});
      }
      break;
    }
    blocks_.pop_back();
  }

  ExprPtr build(Position position, ExprNode node) {
    ExprPtr e = makeExpr(position, std::move(node));
    if (e->depth > kMaxExpressionDepth) {
      fail("expression-too-deep", "expression is nested too deeply",
           position);
    }
    return e;
  }

  ExprPtr parseExpr() { return parseOverlay(); }

  ExprPtr parseOverlay() {
    ExprPtr lhs = parseComparison();
    if (peekOp("&")) {
      Position at = advance().position;
      ExprPtr rhs = parseOverlay();
      return build(at, Binary{BinaryOp::overlay, lhs, rhs});
    }
    return lhs;
  }

  static std::optional<BinaryOp> comparisonOp(const Token* t) {
    if (!t || t->kind != TokenKind::op) return std::nullopt;
    const std::string& s = t->lexeme;
    if (s == "<") return BinaryOp::less;
    if (s == "<=") return BinaryOp::lessEqual;
    if (s == ">") return BinaryOp::greater;
    if (s == ">=") return BinaryOp::greaterEqual;
    if (s == "==") return BinaryOp::equal;
    if (s == "/=") return BinaryOp::notEqual;
    return std::nullopt;
  }

  ExprPtr parseComparison() {
    ExprPtr lhs = parseAdditive();
    if (auto op = comparisonOp(peek())) {
      Position at = advance().position;
      ExprPtr rhs = parseAdditive();
      if (comparisonOp(peek())) {
        fail("chained-comparison",
             "comparisons cannot be chained; use parentheses",
             peek()->position);
      }
      return build(at, Binary{*op, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parseAdditive() {
    ExprPtr lhs = parseMultiplicative();
    while (peekOp("+") || peekOp("-")) {
      const Token& t = advance();
      BinaryOp op = t.lexeme == "+" ? BinaryOp::add : BinaryOp::subtract;
      ExprPtr rhs = parseMultiplicative();
      lhs = build(t.position, Binary{op, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parseMultiplicative() {
    ExprPtr lhs = parseUnary();
    while (peekOp("*") || peekOp("/")) {
      const Token& t = advance();
      BinaryOp op = t.lexeme == "*" ? BinaryOp::multiply : BinaryOp::divide;
      ExprPtr rhs = parseUnary();
      lhs = build(t.position, Binary{op, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parseUnary() {
    if (peekOp("-")) {
      Position at = advance().position;
      ExprPtr operand = parseUnary();
      return build(at, Negate{operand});
    }
    return parseIndex();
  }

  ExprPtr parseIndex() {
    ExprPtr lhs = parsePrimary();
    while (peekOp("#")) {
      Position at = advance().position;
      ExprPtr rhs = parsePrimary();
      lhs = build(at, Index{lhs, rhs});
    }
    return lhs;
  }

  // Parses `e1, e2, ... close` after an opening bracket.
  std::vector<ExprPtr> parseSequence(TokenKind close, Position open,
                                     bool allowEmpty) {
    std::vector<ExprPtr> items;
    if (allowEmpty && peekIs(close)) {
      advance();
      return items;
    }
    const char* closeText = close == TokenKind::closeParen ? "')'" : "']'";
    const char* openText = close == TokenKind::closeParen ? "'('" : "'['";
    while (true) {
      items.push_back(parseExpr());
      if (peekIs(TokenKind::comma)) {
        advance();
        continue;
      }
      if (peekIs(close)) {
        advance();
        return items;
      }
      const Token* t = peek();
      if (!t || t->kind == TokenKind::closeParen ||
          t->kind == TokenKind::closeBracket) {
        fail("unbalanced-brackets",
             std::string("missing ") + closeText + " to close " + openText,
             open);
      }
      unexpected(std::string("',' or ") + closeText);
    }
  }

  ExprPtr parsePrimary() {
    const Token* t = peek();
    if (!t) unexpected("an expression");
    Position at = t->position;
    switch (t->kind) {
      case TokenKind::number: {
        const Token& tok = advance();
        return build(at, NumberLiteral{tok.number, tok.lexeme});
      }
      case TokenKind::text: {
        const Token& tok = advance();
        return build(at, TextLiteral{tok.text});
      }
      case TokenKind::identifier: {
        if (t->lexeme == kWhere) {
          fail("unexpected-token", "'where' must follow a complete body", at);
        }
        std::string name = advance().lexeme;
        if (peekIs(TokenKind::openParen)) {
          Position open = advance().position;
          if (peekIs(TokenKind::closeParen)) {
            fail("empty-arguments",
                 "call to '" + name + "' needs at least one argument", open);
          }
          auto args = parseSequence(TokenKind::closeParen, open, false);
          return build(at, Call{std::move(name), std::move(args)});
        }
        return build(at, Identifier{std::move(name)});
      }
      case TokenKind::openParen: {
        advance();
        auto items = parseSequence(TokenKind::closeParen, at, false);
        if (items.size() == 1) return build(at, Paren{items.front()});
        return build(at, TupleLiteral{std::move(items)});
      }
      case TokenKind::openBracket: {
        advance();
        auto items = parseSequence(TokenKind::closeBracket, at, true);
        return build(at, ListLiteral{std::move(items)});
      }
      default:
        unexpected("an expression");
    }
  }

  const std::vector<Token>& tokens_;
  size_t pos_ = 0;
  std::vector<int> blocks_{1};
  std::vector<Definition*> defs_;
  ParseResult result_;
};

}  // namespace

ParseResult parse(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

ParseResult parseSource(std::string_view source) {
  TokenizeResult lexed = tokenize(source);
  if (!lexed.ok()) {
    ParseResult result;
    result.diagnostics = std::move(lexed.diagnostics);
    return result;
  }
  return parse(lexed.tokens);
}

}  // namespace funcanvas
