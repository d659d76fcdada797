// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>

#include <fcntl.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"

extern char** environ;

namespace funcanvas {
namespace {

namespace fs = std::filesystem;
using testing::readFile;

struct Outcome {
  int exit = -1;
  std::string out;  // stdout and stderr together
};

Outcome runCli(const std::string& args) {
  std::string command = std::string(FUNCANVAS_CLI) + " " + args + " 2>&1";
  Outcome outcome;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return outcome;
  std::array<char, 4096> buffer;
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe)) {
    outcome.out.append(buffer.data(), n);
  }
  int status = pclose(pipe);
  outcome.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return outcome;
}

// Binds port 0, reads the port back and releases it.
int freePort() {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  socklen_t length = sizeof addr;
  int port = -1;
  if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0 &&
      getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &length) == 0) {
    port = ntohs(addr.sin_port);
  }
  close(fd);
  return port;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("funcanvas_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  static std::string corpusFile(const std::string& name) {
    return std::string(FUNCANVAS_CORPUS_DIR) + "/" + name;
  }

  fs::path dir_;
};

TEST_F(Cli, RenderHouseMatchesGolden) {
  Outcome o = runCli("render " + corpusFile("house.fcw") + " -o " + path("house.svg"));
  EXPECT_EQ(o.exit, 0) << o.out;
  EXPECT_EQ(readFile(path("house.svg")),
            readFile(std::string(FUNCANVAS_GOLDEN_DIR) + "/house.svg"));
}

TEST_F(Cli, CheckReportsMisspelling) {
  std::string file = write("broken.fcw", "program = drawingOf(solidCirle(1))\n");
  Outcome o = runCli("check " + file);
  EXPECT_EQ(o.exit, 1);
  EXPECT_EQ(o.out, file +
                       ":1:21: error[unknown-identifier]: unknown name 'solidCirle' "
                       "(did you mean 'solidCircle'?)\n");
  EXPECT_EQ(runCli("check " + corpusFile("house.fcw")).exit, 0);
}

TEST_F(Cli, FramesWritesNumberedFiles) {
  Outcome o = runCli("frames " + corpusFile("spin.fcw") +
                     " --fps 10 --duration 1 -o " + path("out"));
  EXPECT_EQ(o.exit, 0) << o.out;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(path("out"))) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  ASSERT_EQ(names.size(), 10u);
  EXPECT_EQ(names.front(), "frame_0000.svg");
  EXPECT_EQ(names.back(), "frame_0009.svg");
}

TEST_F(Cli, RuntimeErrorsExitOne) {
  std::string file = write("bad.fcw", "program = drawingOf(circle(1 / 0))\n");
  Outcome o = runCli("render " + file + " -o " + path("x.svg"));
  EXPECT_EQ(o.exit, 1);
  EXPECT_NE(o.out.find("division-by-zero"), std::string::npos) << o.out;
  EXPECT_FALSE(fs::exists(path("x.svg")));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(runCli("").exit, 2);
  EXPECT_EQ(runCli("paint house.fcw").exit, 2);
  EXPECT_EQ(runCli("render").exit, 2);
  EXPECT_EQ(runCli("render " + path("missing.fcw")).exit, 2);
  EXPECT_EQ(runCli("frames " + corpusFile("spin.fcw") + " --fps 0 -o " + path("o")).exit,
            2);
  EXPECT_EQ(runCli("lint " + corpusFile("house.fcw") + " --rubric " +
                   write("r.json", "[{\"id\": \"R9\"}]"))
                .exit,
            2);
  EXPECT_EQ(runCli("--version").exit, 0);
}

TEST_F(Cli, LintTextJsonAndExpected) {
  Outcome text = runCli("lint " + corpusFile("house.fcw"));
  EXPECT_EQ(text.exit, 0);
  EXPECT_NE(text.out.find("R4 locals: low 2/4"), std::string::npos) << text.out;
  EXPECT_NE(text.out.find("total: 22/24"), std::string::npos);

  std::string rubric = write("r.json", R"([{"id": "R4", "points": {"low": 10}}])");
  Outcome custom = runCli("lint --json " + corpusFile("house.fcw") + " --rubric " + rubric);
  EXPECT_EQ(custom.exit, 0) << custom.out;
  auto doc = nlohmann::json::parse(custom.out);
  EXPECT_EQ(doc["total"], 10);

  std::string golden = std::string(FUNCANVAS_GOLDEN_DIR) + "/house.svg";
  Outcome same = runCli("lint " + corpusFile("house.fcw") + " --expected " + golden);
  EXPECT_EQ(same.exit, 0);
  EXPECT_NE(same.out.find("expected output: matches"), std::string::npos);
  Outcome differs = runCli("lint " + corpusFile("clock.fcw") + " --expected " + golden);
  EXPECT_EQ(differs.exit, 1);
  EXPECT_NE(differs.out.find("expected output: differs"), std::string::npos);
}

TEST_F(Cli, FmtIsCanonicalAndStable) {
  std::string file = write("messy.fcw", "program=drawingOf( circle(1)&square )\n"
                                        "square   =   solidRectangle(2,2)\n");
  Outcome first = runCli("fmt " + file);
  EXPECT_EQ(first.exit, 0);
  EXPECT_EQ(first.out,
            "program = drawingOf(circle(1) & square)\nsquare = solidRectangle(2, 2)\n");
  EXPECT_EQ(runCli("fmt -w " + file).exit, 0);
  EXPECT_EQ(readFile(file), first.out);
  EXPECT_EQ(runCli("fmt " + file).out, first.out);
  EXPECT_EQ(runCli("fmt " + write("bad.fcw", "x = (1\n")).exit, 1);
}

TEST_F(Cli, ServeHonorsPortVariable) {
  int port = freePort();
  ASSERT_GT(port, 0);
  std::string portVar = "FUNCANVAS_PORT=" + std::to_string(port);
  std::vector<char*> env;
  for (char** e = environ; *e; ++e) env.push_back(*e);
  env.push_back(portVar.data());
  env.push_back(nullptr);
  std::string cli = FUNCANVAS_CLI;
  std::vector<std::string> args = {cli, "serve", "--port", "1"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 2, path("serve.log").c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid;
  ASSERT_EQ(posix_spawn(&pid, cli.c_str(), &actions, nullptr, argv.data(), env.data()),
            0);
  posix_spawn_file_actions_destroy(&actions);
  struct Reaper {
    explicit Reaper(pid_t p) : pid(p) {}
    Reaper(const Reaper&) = delete;
    pid_t pid;
    ~Reaper() {
      kill(pid, SIGTERM);
      waitpid(pid, nullptr, 0);
    }
  };
  std::optional<Reaper> reaper;
  reaper.emplace(pid);

  httplib::Client client("127.0.0.1", port);
  httplib::Result health;
  for (int attempt = 0; attempt < 100 && !health; ++attempt) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    health = client.Get("/health");
  }
  ASSERT_TRUE(health) << readFile(path("serve.log"));
  EXPECT_EQ(nlohmann::json::parse(health->body)["status"], "ok");
  auto compiled = client.Post(
      "/compile", R"json({"source": "program = drawingOf(circle(1))", "mode": "draw"})json",
      "application/json");
  ASSERT_TRUE(compiled);
  EXPECT_TRUE(nlohmann::json::parse(compiled->body)["ok"]);
  reaper.reset();
  std::string log = readFile(path("serve.log"));
  EXPECT_NE(log.find("mode=draw ok=true"), std::string::npos) << log;
}

}  // namespace
}  // namespace funcanvas
