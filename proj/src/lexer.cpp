// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>

#include "funcanvas/syntax.hpp"

namespace funcanvas {

std::string_view toString(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier:
      return "identifier";
    case TokenKind::number:
      return "number";
    case TokenKind::text:
      return "text";
    case TokenKind::op:
      return "operator";
    case TokenKind::openParen:
      return "'('";
    case TokenKind::closeParen:
      return "')'";
    case TokenKind::openBracket:
      return "'['";
    case TokenKind::closeBracket:
      return "']'";
    case TokenKind::comma:
      return "','";
    case TokenKind::equals:
      return "'='";
    case TokenKind::vbar:
      return "'|'";
    case TokenKind::newline:
      return "end of line";
    case TokenKind::indent:
      return "continuation line";
  }
  return "token";
}

namespace {

bool isIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool isIdentChar(char c) {
  return isIdentStart(c) || (c >= '0' && c <= '9');
}

bool isDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {
    // UTF-8 byte order mark
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  TokenizeResult run() {
    while (pos_ < src_.size()) {
      lexLine();
    }
    return std::move(result_);
  }

 private:
  // Column of byte offset `offset` on the current line, counting UTF-8
  // code points.
  int columnOf(size_t offset) const {
    int column = 1;
    for (size_t i = lineStart_; i < offset; ++i) {
      if ((static_cast<unsigned char>(src_[i]) & 0xC0) != 0x80) ++column;
    }
    return column;
  }

  Position here(size_t offset) const { return {line_, columnOf(offset)}; }

  void error(std::string code, std::string message, size_t offset) {
    result_.diagnostics.push_back(
        makeError(std::move(code), std::move(message), here(offset)));
  }

  void push(TokenKind kind, size_t begin, size_t end) {
    Token token;
    token.kind = kind;
    token.lexeme = std::string(src_.substr(begin, end - begin));
    token.position = here(begin);
    result_.tokens.push_back(std::move(token));
  }

  void lexLine() {
    lineStart_ = pos_;
    bool first = true;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        continue;
      }
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        break;
      }
      if (first) {
        startLogicalLine();
        first = false;
      }
      lexToken();
    }
    if (!first) {
      // Where the line terminator sits; used as the next newline position.
      lastLineEnd_ = here(pos_);
    }
    if (pos_ < src_.size()) ++pos_;  // '\n'
    ++line_;
  }

  void startLogicalLine() {
    int column = columnOf(pos_);
    if (column > 1) {
      Token token;
      token.kind = TokenKind::indent;
      token.position = {line_, 1};
      token.layoutColumn = column;
      result_.tokens.push_back(std::move(token));
    } else if (!result_.tokens.empty()) {
      Token token;
      token.kind = TokenKind::newline;
      token.lexeme = "\n";
      token.position = lastLineEnd_;
      result_.tokens.push_back(std::move(token));
    }
  }

  void lexToken() {
    size_t begin = pos_;
    char c = src_[pos_];
    if (isIdentStart(c)) {
      while (pos_ < src_.size() && isIdentChar(src_[pos_])) ++pos_;
      push(TokenKind::identifier, begin, pos_);
      return;
    }
    if (isDigit(c)) {
      lexNumber(begin);
      return;
    }
    if (c == '"') {
      lexText(begin);
      return;
    }
    auto two = src_.substr(pos_, 2);
    if (two == "<=" || two == ">=" || two == "==" || two == "/=") {
      pos_ += 2;
      push(TokenKind::op, begin, pos_);
      return;
    }
    ++pos_;
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '&':
      case '<':
      case '>':
      case '#':
        push(TokenKind::op, begin, pos_);
        return;
      case '(':
        push(TokenKind::openParen, begin, pos_);
        return;
      case ')':
        push(TokenKind::closeParen, begin, pos_);
        return;
      case '[':
        push(TokenKind::openBracket, begin, pos_);
        return;
      case ']':
        push(TokenKind::closeBracket, begin, pos_);
        return;
      case ',':
        push(TokenKind::comma, begin, pos_);
        return;
      case '=':
        push(TokenKind::equals, begin, pos_);
        return;
      case '|':
        push(TokenKind::vbar, begin, pos_);
        return;
      default:
        break;
    }
    // Swallow the rest of a multi-byte character so it is reported once.
    while (pos_ < src_.size() &&
           (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
      ++pos_;
    }
    error("illegal-character",
          "illegal character '" + std::string(src_.substr(begin, pos_ - begin)) +
              "'",
          begin);
  }

  void lexNumber(size_t begin) {
    while (pos_ < src_.size() && isDigit(src_[pos_])) ++pos_;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        isDigit(src_[pos_ + 1])) {
      ++pos_;
      while (pos_ < src_.size() && isDigit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < src_.size() && isDigit(src_[pos_])) {
        while (pos_ < src_.size() && isDigit(src_[pos_])) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double value = 0;
    auto [ptr, ec] =
        std::from_chars(src_.data() + begin, src_.data() + pos_, value);
    if (ec != std::errc() || !std::isfinite(value)) {
      error("number-out-of-range",
            "number literal '" + std::string(src_.substr(begin, pos_ - begin)) +
                "' is not a finite number",
            begin);
      return;
    }
    push(TokenKind::number, begin, pos_);
    result_.tokens.back().number = value;
  }

  void lexText(size_t begin) {
    ++pos_;  // opening quote
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      char c = src_[pos_];
      if (c == '"') {
        ++pos_;
        push(TokenKind::text, begin, pos_);
        result_.tokens.back().text = std::move(value);
        return;
      }
      if (c == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') {
        char e = src_[pos_ + 1];
        value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        pos_ += 2;
        continue;
      }
      if (c != '\r') value += c;
      ++pos_;
    }
    error("unterminated-text", "text literal is missing its closing '\"'",
          begin);
  }

  std::string_view src_;
  size_t pos_ = 0;
  size_t lineStart_ = 0;
  int line_ = 1;
  Position lastLineEnd_;
  TokenizeResult result_;
};

}  // namespace

TokenizeResult tokenize(std::string_view source) {
  return Lexer(source).run();
}

}  // namespace funcanvas
