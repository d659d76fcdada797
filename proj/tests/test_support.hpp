// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test suites: corpus access and random program
// generators.

#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "funcanvas/number_format.hpp"
#include "funcanvas/syntax.hpp"

namespace funcanvas::testing {

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string corpus(const std::string& name) {
  return readFile(std::string(FUNCANVAS_CORPUS_DIR) + "/" + name);
}

inline std::string houseSource() { return corpus("house.fcw"); }

/// Random expression source over a fixed vocabulary.
class ExprGenerator {
 public:
  explicit ExprGenerator(uint64_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string literal() {
    static const char* values[] = {"0", "1", "2", "3", "7", "0.5",
                                   "1.25", "10", "42", "100"};
    return values[pick(10)];
  }

  /// Integer-valued arithmetic over + - * and unary minus, no division.
  std::string arithmetic(int depth) {
    if (depth <= 1 || pick(4) == 0) return literal();
    switch (pick(5)) {
      case 0:
        return arithmetic(depth - 1) + " + " + arithmetic(depth - 1);
      case 1:
        return arithmetic(depth - 1) + " - " + arithmetic(depth - 1);
      case 2:
        return arithmetic(depth - 1) + " * " + arithmetic(depth - 1);
      case 3:
        return "-" + paren(arithmetic(depth - 1));
      default:
        return paren(arithmetic(depth - 1));
    }
  }

  /// Like arithmetic(), but also computes the value while generating, in
  /// the same operation order a strict evaluator would use.
  std::pair<std::string, double> arithmeticWithValue(int depth) {
    if (depth <= 1 || pick(4) == 0) {
      std::string text = literal();
      return {text, std::stod(text)};
    }
    switch (pick(5)) {
      case 0:
      case 1:
      case 2: {
        auto [lt, lv] = arithmeticWithValue(depth - 1);
        auto [rt, rv] = arithmeticWithValue(depth - 1);
        int op = pick(3);
        // Operands are parenthesized so the text needs no precedence rules.
        std::string text = paren(lt) + (op == 0 ? " + " : op == 1 ? " - " : " * ") +
                           paren(rt);
        double v = op == 0 ? lv + rv : op == 1 ? lv - rv : lv * rv;
        return {text, v};
      }
      case 3: {
        auto [t, v] = arithmeticWithValue(depth - 1);
        return {"-" + paren(t), -v};
      }
      default: {
        auto [t, v] = arithmeticWithValue(depth - 1);
        return {paren(t), v};
      }
    }
  }

  /// Any expression shape the grammar accepts (not necessarily well typed).
  std::string anyExpr(int depth) {
    if (depth <= 1) {
      switch (pick(4)) {
        case 0:
          return literal();
        case 1:
          return "\"t" + std::to_string(pick(9)) + "\"";
        default:
          return name();
      }
    }
    static const char* ops[] = {"+",  "-", "*",  "/",  "&",  "<",
                                "<=", ">", ">=", "==", "/="};
    switch (pick(8)) {
      case 0:
        return anyExpr(depth - 1) + " " + ops[pick(11)] + " " +
               anyExpr(depth - 1);
      case 1:
        return "-" + paren(anyExpr(depth - 1));
      case 2:
        return paren(anyExpr(depth - 1));
      case 3:
        return name() + "(" + anyExpr(depth - 1) + ", " + anyExpr(depth - 1) +
               ")";
      case 4:
        return "[" + anyExpr(depth - 1) + ", " + anyExpr(depth - 1) + "]";
      case 5:
        return "(" + anyExpr(depth - 1) + ", " + anyExpr(depth - 1) + ")";
      case 6:
        return paren(anyExpr(depth - 1)) + " # " + literal();
      default:
        return anyExpr(depth - 1) + " & " + anyExpr(depth - 1);
    }
  }

  std::string name() {
    static const char* names[] = {"alpha", "beta", "gamma", "delta", "x"};
    return names[pick(5)];
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static std::string paren(const std::string& s) { return "(" + s + ")"; }

  std::mt19937_64 rng_;
};

/// Number of `<tag` elements in an SVG document.
inline int countElements(const std::string& svg, const std::string& tag) {
  int count = 0;
  const std::string open = "<" + tag + " ";
  for (std::size_t at = svg.find(open); at != std::string::npos;
       at = svg.find(open, at + 1)) {
    ++count;
  }
  return count;
}

/// An SVG document split into its non-numeric skeleton and the numbers in
/// it, so that two renders can be compared with a coordinate tolerance.
struct SvgNumbers {
  std::string skeleton;
  std::vector<double> numbers;
};

inline SvgNumbers splitNumbers(const std::string& svg) {
  SvgNumbers out;
  const char* p = svg.c_str();
  while (*p) {
    bool startsNumber = (std::isdigit(static_cast<unsigned char>(*p)) ||
                         ((*p == '-' || *p == '.') &&
                          std::isdigit(static_cast<unsigned char>(p[1]))));
    // Digits inside names such as "svg1" or hex colors stay in the skeleton.
    bool afterWord = !out.skeleton.empty() &&
                     (std::isalnum(static_cast<unsigned char>(out.skeleton.back())) ||
                      out.skeleton.back() == '#');
    if (startsNumber && !afterWord) {
      char* end = nullptr;
      out.numbers.push_back(std::strtod(p, &end));
      out.skeleton += '~';
      p = end;
    } else {
      out.skeleton += *p++;
    }
  }
  return out;
}

/// Empty when the documents agree up to `tolerance` on every number.
inline std::string compareSvg(const std::string& a, const std::string& b,
                              double tolerance) {
  SvgNumbers x = splitNumbers(a), y = splitNumbers(b);
  if (x.skeleton != y.skeleton) return "documents differ in structure";
  for (std::size_t i = 0; i < x.numbers.size(); ++i) {
    if (std::fabs(x.numbers[i] - y.numbers[i]) > tolerance) {
      return "number " + std::to_string(i) + " differs: " +
             std::to_string(x.numbers[i]) + " vs " + std::to_string(y.numbers[i]);
    }
  }
  return "";
}

}  // namespace funcanvas::testing
