// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/diagnostic.hpp"

#include <algorithm>

namespace funcanvas {

std::string_view toString(Severity severity) {
  switch (severity) {
    case Severity::error:
      return "error";
    case Severity::warning:
      return "warning";
    case Severity::info:
      return "info";
  }
  return "error";
}

bool hasErrors(const Diagnostics& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) {
                       return d.severity == Severity::error;
                     });
}

std::string formatDiagnostic(const Diagnostic& diagnostic,
                             std::string_view file) {
  std::string out;
  if (!file.empty()) {
    out += file;
    out += ':';
  }
  out += std::to_string(diagnostic.position.line);
  out += ':';
  out += std::to_string(diagnostic.position.column);
  out += ": ";
  out += toString(diagnostic.severity);
  out += '[';
  out += diagnostic.code;
  out += "]: ";
  out += diagnostic.message;
  if (diagnostic.suggestion) {
    out += " (did you mean '";
    out += *diagnostic.suggestion;
    out += "'?)";
  }
  return out;
}

}  // namespace funcanvas
