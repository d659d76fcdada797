// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "funcanvas/diagnostic.hpp"
#include "funcanvas/lint.hpp"

namespace funcanvas {

enum class Mode { check, draw, animate };

std::string_view toString(Mode mode);

struct CompileRequest {
  std::string source;
  Mode mode = Mode::draw;
  std::optional<uint64_t> fuel;
  double fps = 10;
  double duration = 1;
  // Attach a rubric report computed with the default rubric.
  bool lint = false;
};

struct CompileLimits {
  std::size_t maxSourceBytes = 256 * 1024;
  // Unset means no wall-clock limit (the CLI).
  std::optional<std::chrono::milliseconds> wallClock = std::chrono::seconds(5);
  std::size_t maxOutputBytes = 16 * 1024 * 1024;
  uint64_t maxFuel = 10'000'000;
  std::size_t maxFrames = 1000;
};

struct CompileResponse {
  bool ok = false;
  Diagnostics diagnostics;
  std::optional<std::string> svg;
  std::optional<std::vector<std::string>> frames;
  std::optional<LintReport> lint;
};

/// A request the service refuses before compiling. `status` is the HTTP
/// status to answer with.
class RequestError : public std::invalid_argument {
 public:
  RequestError(int status, const std::string& message)
      : std::invalid_argument(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

/// Parses the JSON body of POST /compile. Throws RequestError(400) for
/// malformed JSON or fields of the wrong type.
CompileRequest parseCompileRequest(std::string_view body);

/// Runs the pipeline for one request: analyze, then evaluate and render for
/// draw and animate. Every failure becomes an error diagnostic with ok=false.
/// Throws RequestError(413) when the source exceeds the limit.
CompileResponse compile(const CompileRequest& request,
                        const CompileLimits& limits = {});

std::string responseToJson(const CompileResponse& response);

/// What the HTTP layer needs from one /compile call.
struct CompileExchange {
  int status = 200;
  std::string body;
  std::string mode = "-";
  bool ok = false;
  std::string sourceHash = "-";
};

/// parse + compile + serialize, mapping RequestError to its status.
CompileExchange handleCompile(std::string_view body,
                              const CompileLimits& limits = {});

}  // namespace funcanvas
