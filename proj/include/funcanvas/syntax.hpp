// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "funcanvas/diagnostic.hpp"

namespace funcanvas {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind {
  identifier,
  number,
  text,
  op,
  openParen,
  closeParen,
  openBracket,
  closeBracket,
  comma,
  equals,
  vbar,
  // Separates two logical lines (the next line starts in column 1).
  newline,
  // Starts a continuation line; `layoutColumn` is the column of its first
  // token.
  indent,
};

std::string_view toString(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::identifier;
  std::string lexeme;
  Position position;
  // indent: column of the first token on the line.
  int layoutColumn = 0;
  // number: parsed value; text: decoded contents live in `text`.
  double number = 0;
  std::string text;
};

struct TokenizeResult {
  std::vector<Token> tokens;
  Diagnostics diagnostics;

  bool ok() const { return !hasErrors(diagnostics); }
};

/// Splits source text into tokens. Comments run from `--` to end of line.
/// A line whose first token is not in column 1 is a continuation of the
/// previous line and is introduced by an `indent` marker; every other
/// non-empty line after the first is introduced by a `newline`.
TokenizeResult tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// Syntax tree
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp {
  add,
  subtract,
  multiply,
  divide,
  overlay,
  less,
  lessEqual,
  greater,
  greaterEqual,
  equal,
  notEqual,
};

std::string_view spelling(BinaryOp op);

struct NumberLiteral {
  double value = 0;
  // Source spelling, kept so that formatting reproduces the input.
  std::string lexeme;
};

struct TextLiteral {
  std::string value;
};

struct Identifier {
  std::string name;
};

struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Negate {
  ExprPtr operand;
};

struct ListLiteral {
  std::vector<ExprPtr> elements;
};

/// Arity >= 2; `(e)` is a Paren.
struct TupleLiteral {
  std::vector<ExprPtr> elements;
};

/// `list # n`, 1-based.
struct Index {
  ExprPtr list;
  ExprPtr index;
};

struct Paren {
  ExprPtr inner;
};

using ExprNode = std::variant<NumberLiteral, TextLiteral, Identifier, Call,
                              Binary, Negate, ListLiteral, TupleLiteral, Index,
                              Paren>;

struct Expr {
  Position position;
  ExprNode node;
  // Height of the subtree; leaves are 1.
  int depth = 1;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

/// Builds an expression node, computing its depth from its children.
ExprPtr makeExpr(Position position, ExprNode node);

/// Children in source order.
std::vector<ExprPtr> children(const Expr& expr);

struct Param {
  std::string name;
  Position position;
};

/// One clause `head(params) | guard = body where locals`.
struct Definition {
  std::string name;
  Position position;
  std::vector<Param> params;
  ExprPtr guard;  // null when the clause is unguarded
  ExprPtr body;
  std::vector<Definition> locals;
  // Columns of the continuation lines that belong to this clause.
  std::vector<int> continuationColumns;

  int arity() const { return static_cast<int>(params.size()); }
};

struct SyntaxTree {
  std::vector<Definition> definitions;
};

struct ParseResult {
  SyntaxTree tree;
  Diagnostics diagnostics;

  bool ok() const { return !hasErrors(diagnostics); }
};

inline constexpr int kMaxExpressionDepth = 1000;

ParseResult parse(const std::vector<Token>& tokens);

/// tokenize + parse; tokenizer diagnostics short-circuit parsing.
ParseResult parseSource(std::string_view source);

// ---------------------------------------------------------------------------
// Printing and comparison
// ---------------------------------------------------------------------------

/// Canonical layout: one clause per line, one space around `=`, `where`
/// blocks on two-space indented continuation lines.
std::string formatProgram(const SyntaxTree& tree);
std::string formatExpr(const Expr& expr);

/// Position-insensitive equality. Literal spellings are ignored; values
/// compare bitwise.
bool structurallyEqual(const Expr& a, const Expr& b);
bool structurallyEqual(const Definition& a, const Definition& b);
bool structurallyEqual(const SyntaxTree& a, const SyntaxTree& b);

/// Removes grouping parentheses, keeping the tree shape they imply.
ExprPtr stripParens(const ExprPtr& expr);

}  // namespace funcanvas
