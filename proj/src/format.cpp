// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>

#include "funcanvas/number_format.hpp"
#include "funcanvas/syntax.hpp"

namespace funcanvas {
namespace {

constexpr std::size_t kLineWidth = 80;

enum Precedence : int {
  kOverlay = 1,
  kComparison = 2,
  kAdditive = 3,
  kMultiplicative = 4,
  kUnary = 5,
  kIndex = 6,
  kPrimary = 7,
};

int precedenceOf(BinaryOp op) {
  switch (op) {
    case BinaryOp::overlay:
      return kOverlay;
    case BinaryOp::add:
    case BinaryOp::subtract:
      return kAdditive;
    case BinaryOp::multiply:
    case BinaryOp::divide:
      return kMultiplicative;
    default:
      return kComparison;
  }
}

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

std::string joined(const std::vector<ExprPtr>& items);

std::string print(const Expr& expr, int context) {
  std::string text;
  int own = kPrimary;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLiteral>) {
          text = n.lexeme.empty() ? formatNumber(n.value) : n.lexeme;
          if (std::signbit(n.value) && n.value != 0) own = kUnary;
        } else if constexpr (std::is_same_v<T, TextLiteral>) {
          text = quote(n.value);
        } else if constexpr (std::is_same_v<T, Identifier>) {
          text = n.name;
        } else if constexpr (std::is_same_v<T, Call>) {
          text = n.callee + "(" + joined(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          own = precedenceOf(n.op);
          int left = own;
          int right = own + 1;
          if (n.op == BinaryOp::overlay) {
            left = own + 1;
            right = own;
          } else if (own == kComparison) {
            left = right = kAdditive;
          }
          text = print(*n.lhs, left) + " " + std::string(spelling(n.op)) +
                 " " + print(*n.rhs, right);
        } else if constexpr (std::is_same_v<T, Negate>) {
          own = kUnary;
          std::string operand = print(*n.operand, kUnary);
          // "--" would start a comment
          if (operand.front() == '-') operand = "(" + operand + ")";
          text = "-" + operand;
        } else if constexpr (std::is_same_v<T, ListLiteral>) {
          text = "[" + joined(n.elements) + "]";
        } else if constexpr (std::is_same_v<T, TupleLiteral>) {
          text = "(" + joined(n.elements) + ")";
        } else if constexpr (std::is_same_v<T, Index>) {
          own = kIndex;
          text = print(*n.list, kIndex) + " # " + print(*n.index, kPrimary);
        } else if constexpr (std::is_same_v<T, Paren>) {
          text = "(" + print(*n.inner, 0) + ")";
        }
      },
      expr.node);
  if (own < context) return "(" + text + ")";
  return text;
}

std::string joined(const std::vector<ExprPtr>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += print(*items[i], 0);
  }
  return out;
}

void printDefinition(const Definition& def, int indent, std::string& out) {
  out.append(indent, ' ');
  out += def.name;
  if (!def.params.empty()) {
    out += '(';
    for (size_t i = 0; i < def.params.size(); ++i) {
      if (i) out += ", ";
      out += def.params[i].name;
    }
    out += ')';
  }
  if (def.guard) {
    out += " | ";
    out += print(*def.guard, 0);
  }
  out += " = ";
  std::string body = print(*def.body, 0);
  std::size_t lineStart = out.rfind('\n', out.size() - 1);
  std::size_t width = out.size() - (lineStart == std::string::npos ? 0 : lineStart + 1);
  const Binary* chain = def.body->as<Binary>();
  if (width + body.size() > kLineWidth && chain && chain->op == BinaryOp::overlay) {
    // One layer per line: `a` then `& b`, `& c` on continuation lines.
    out += print(*chain->lhs, kOverlay + 1);
    const Expr* rest = chain->rhs.get();
    while (true) {
      out += '\n';
      out.append(indent + 2, ' ');
      out += "& ";
      const Binary* next = rest->as<Binary>();
      if (!next || next->op != BinaryOp::overlay) {
        out += print(*rest, kOverlay);
        break;
      }
      out += print(*next->lhs, kOverlay + 1);
      rest = next->rhs.get();
    }
  } else {
    out += body;
  }
  out += '\n';
  if (!def.locals.empty()) {
    out.append(indent + 2, ' ');
    out += "where\n";
    for (const auto& local : def.locals) {
      printDefinition(local, indent + 4, out);
    }
  }
}

template <typename T>
bool sameList(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!structurallyEqual(*a[i], *b[i])) return false;
  }
  return true;
}

}  // namespace

std::string formatExpr(const Expr& expr) { return print(expr, 0); }

std::string formatProgram(const SyntaxTree& tree) {
  std::string out;
  for (const auto& def : tree.definitions) printDefinition(def, 0, out);
  return out;
}

bool structurallyEqual(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NumberLiteral>) {
          return std::bit_cast<uint64_t>(x.value) ==
                 std::bit_cast<uint64_t>(y.value);
        } else if constexpr (std::is_same_v<T, TextLiteral>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Identifier>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Call>) {
          return x.callee == y.callee && sameList(x.args, y.args);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && structurallyEqual(*x.lhs, *y.lhs) &&
                 structurallyEqual(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurallyEqual(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, ListLiteral> ||
                             std::is_same_v<T, TupleLiteral>) {
          return sameList(x.elements, y.elements);
        } else if constexpr (std::is_same_v<T, Index>) {
          return structurallyEqual(*x.list, *y.list) &&
                 structurallyEqual(*x.index, *y.index);
        } else {
          return structurallyEqual(*x.inner, *y.inner);
        }
      },
      a.node);
}

bool structurallyEqual(const Definition& a, const Definition& b) {
  if (a.name != b.name || a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name) return false;
  }
  if (static_cast<bool>(a.guard) != static_cast<bool>(b.guard)) return false;
  if (a.guard && !structurallyEqual(*a.guard, *b.guard)) return false;
  if (!structurallyEqual(*a.body, *b.body)) return false;
  if (a.locals.size() != b.locals.size()) return false;
  for (size_t i = 0; i < a.locals.size(); ++i) {
    if (!structurallyEqual(a.locals[i], b.locals[i])) return false;
  }
  return true;
}

bool structurallyEqual(const SyntaxTree& a, const SyntaxTree& b) {
  if (a.definitions.size() != b.definitions.size()) return false;
  for (size_t i = 0; i < a.definitions.size(); ++i) {
    if (!structurallyEqual(a.definitions[i], b.definitions[i])) return false;
  }
  return true;
}

ExprPtr stripParens(const ExprPtr& expr) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        auto strip = [](const std::vector<ExprPtr>& items) {
          std::vector<ExprPtr> out;
          for (const auto& item : items) out.push_back(stripParens(item));
          return out;
        };
        if constexpr (std::is_same_v<T, Paren>) {
          return stripParens(n.inner);
        } else if constexpr (std::is_same_v<T, Call>) {
          return makeExpr(expr->position, Call{n.callee, strip(n.args)});
        } else if constexpr (std::is_same_v<T, Binary>) {
          return makeExpr(expr->position, Binary{n.op, stripParens(n.lhs),
                                                 stripParens(n.rhs)});
        } else if constexpr (std::is_same_v<T, Negate>) {
          return makeExpr(expr->position, Negate{stripParens(n.operand)});
        } else if constexpr (std::is_same_v<T, ListLiteral>) {
          return makeExpr(expr->position, ListLiteral{strip(n.elements)});
        } else if constexpr (std::is_same_v<T, TupleLiteral>) {
          return makeExpr(expr->position, TupleLiteral{strip(n.elements)});
        } else if constexpr (std::is_same_v<T, Index>) {
          return makeExpr(expr->position,
                          Index{stripParens(n.list), stripParens(n.index)});
        } else {
          return expr;
        }
      },
      expr->node);
}

}  // namespace funcanvas
