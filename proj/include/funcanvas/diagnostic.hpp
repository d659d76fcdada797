// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace funcanvas {

/// 1-based source position.
struct Position {
  int line = 1;
  int column = 1;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

enum class Severity { error, warning, info };

std::string_view toString(Severity severity);

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  Position position;
  std::optional<std::string> suggestion;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline Diagnostic makeError(std::string code, std::string message,
                            Position position) {
  return {Severity::error, std::move(code), std::move(message), position,
          std::nullopt};
}

bool hasErrors(const Diagnostics& diagnostics);

/// `file:line:col: severity[code]: message (did you mean 'x'?)`
std::string formatDiagnostic(const Diagnostic& diagnostic,
                             std::string_view file = "");

}  // namespace funcanvas
