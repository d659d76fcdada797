// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "funcanvas/service.hpp"

namespace funcanvas {

struct ServerOptions {
  std::string host = "127.0.0.1";
  // 0 picks a free port.
  int port = 8080;
  std::optional<std::string> staticDir;
  // Worker threads, i.e. requests compiled at the same time.
  int threads = 32;
  CompileLimits limits;
  // One line per request; null disables logging.
  std::ostream* log = nullptr;
};

/// POST /compile, GET /health and the static playground bundle at /.
/// Keeps no state between requests.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();

  /// Binds the socket and returns the bound port, or -1 on failure.
  int bind();
  /// Serves until stop(); call after bind().
  bool serve();
  void stop();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace funcanvas
