// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/server.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>

#include "funcanvas/render.hpp"

// The default backlog of 5 drops connections when a class submits at once.
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#include "httplib.h"
#include "json.hpp"

namespace funcanvas {

namespace {

const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>funcanvas</title></head>
<body><p>The playground bundle is not installed. POST programs to
<code>/compile</code>.</p></body></html>
)";

std::string utcTimestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                    now.time_since_epoch()) %
                1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3)
      << std::setfill('0') << millis.count() << 'Z';
  return out.str();
}

}  // namespace

class Server::Impl {
 public:
  explicit Impl(ServerOptions options) : options_(std::move(options)) {
    int threads = options_.threads;
    http_.new_task_queue = [threads] {
      return new httplib::ThreadPool(static_cast<size_t>(threads));
    };
    // JSON escaping can inflate a source up to six times; the source limit
    // itself is enforced after parsing.
    http_.set_payload_max_length(options_.limits.maxSourceBytes * 6 + 4096);

    http_.Post("/compile", [this](const httplib::Request& req, httplib::Response& res) {
      auto start = std::chrono::steady_clock::now();
      CompileExchange exchange = handleCompile(req.body, options_.limits);
      res.status = exchange.status;
      res.set_content(exchange.body, "application/json");
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      log("POST /compile status=" + std::to_string(exchange.status) +
          " mode=" + exchange.mode + " ok=" + (exchange.ok ? "true" : "false") +
          " duration_ms=" + std::to_string(elapsed.count()) +
          " source=" + exchange.sourceHash);
    });

    http_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      nlohmann::json body = {{"status", "ok"}, {"version", kVersion}};
      res.set_content(body.dump(), "application/json");
      log("GET /health status=200");
    });

    bool mounted = options_.staticDir &&
                   http_.set_mount_point("/", *options_.staticDir);
    if (!mounted) {
      http_.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kFallbackPage, "text/html");
      });
    }
    // Static files are logged here; handlers above log themselves.
    http_.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      if (req.path == "/compile" || req.path == "/health") return;
      log(req.method + " " + req.path + " status=" + std::to_string(res.status));
    });
  }

  int bind() {
    if (options_.port == 0) return http_.bind_to_any_port(options_.host);
    return http_.bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }

  bool serve() { return http_.listen_after_bind(); }
  void stop() { http_.stop(); }

 private:
  void log(const std::string& line) {
    if (!options_.log) return;
    std::lock_guard<std::mutex> lock(logMutex_);
    *options_.log << utcTimestamp() << ' ' << line << std::endl;
  }

  ServerOptions options_;
  httplib::Server http_;
  std::mutex logMutex_;
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Server::~Server() = default;

int Server::bind() { return impl_->bind(); }
bool Server::serve() { return impl_->serve(); }
void Server::stop() { impl_->stop(); }

}  // namespace funcanvas
