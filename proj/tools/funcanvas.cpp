// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "funcanvas/analysis.hpp"
#include "funcanvas/lint.hpp"
#include "funcanvas/render.hpp"
#include "funcanvas/server.hpp"
#include "funcanvas/service.hpp"
#include "funcanvas/syntax.hpp"

namespace fs = std::filesystem;
using namespace funcanvas;

namespace {

constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readInput(const std::string& path) {
  std::ostringstream out;
  if (path == "-") {
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  out << in.rdbuf();
  return out.str();
}

void writeOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

CompileLimits cliLimits() {
  CompileLimits limits;
  limits.maxSourceBytes = std::numeric_limits<std::size_t>::max();
  limits.wallClock.reset();
  limits.maxOutputBytes = std::numeric_limits<std::size_t>::max();
  limits.maxFuel = std::numeric_limits<uint64_t>::max();
  limits.maxFrames = std::numeric_limits<std::size_t>::max();
  return limits;
}

// Prints every diagnostic; true when none is an error.
bool report(const Diagnostics& diagnostics, const std::string& file) {
  for (const Diagnostic& d : diagnostics) {
    std::cerr << formatDiagnostic(d, file == "-" ? "<stdin>" : file) << '\n';
  }
  return !hasErrors(diagnostics);
}

CompileResponse run(const std::string& file, Mode mode, uint64_t fuel,
                    double fps = 10, double duration = 1) {
  CompileRequest request;
  request.source = readInput(file);
  request.mode = mode;
  request.fuel = fuel;
  request.fps = fps;
  request.duration = duration;
  return compile(request, cliLimits());
}

std::string withoutComments(const std::string& svg) {
  static const std::regex comment("<!--[^]*?-->\n?");
  return std::regex_replace(svg, comment, "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"funcanvas: check, draw, animate and grade picture programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string file;
  uint64_t fuel = EvalOptions::kDefaultFuel;
  std::string output;

  auto* check = app.add_subcommand("check", "report diagnostics for a program");
  check->add_option("file", file, "source file, or - for stdin")->required();

  auto* render = app.add_subcommand("render", "draw a program to SVG");
  render->add_option("file", file, "source file, or - for stdin")->required();
  render->add_option("-o,--output", output, "SVG file (default: stdout)");
  render->add_option("--fuel", fuel, "evaluation budget")->check(CLI::PositiveNumber);

  double fps = 10, duration = 1;
  auto* frames = app.add_subcommand("frames", "render an animation frame by frame");
  frames->add_option("file", file, "source file, or - for stdin")->required();
  frames->add_option("--fps", fps, "frames per second")->check(CLI::PositiveNumber);
  frames->add_option("--duration", duration, "seconds")->check(CLI::NonNegativeNumber);
  frames->add_option("-o,--output", output, "output directory")->required();
  frames->add_option("--fuel", fuel, "evaluation budget per frame")
      ->check(CLI::PositiveNumber);

  std::string rubricPath, expectedPath;
  bool lintJson = false;
  auto* lint = app.add_subcommand("lint", "score a program against a rubric");
  lint->add_option("file", file, "source file, or - for stdin")->required();
  lint->add_option("--rubric", rubricPath, "rubric JSON (default: built-in rules)");
  lint->add_option("--expected", expectedPath, "golden SVG to compare the drawing to");
  lint->add_flag("--json", lintJson, "print the report as JSON");

  int port = 8080;
  std::string host = "127.0.0.1", staticDir;
  auto* serve = app.add_subcommand("serve", "run the playground service");
  serve->add_option("--port", port, "TCP port (FUNCANVAS_PORT overrides)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "address to listen on");
  serve->add_option("--static", staticDir, "playground bundle directory")
      ->check(CLI::ExistingDirectory);

  bool inPlace = false;
  auto* fmt = app.add_subcommand("fmt", "print a program in canonical layout");
  fmt->add_option("file", file, "source file, or - for stdin")->required();
  fmt->add_flag("-w,--write", inPlace, "rewrite the file instead of printing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) {
      AnalysisResult analysis = analyze(readInput(file));
      return report(analysis.diagnostics, file) ? 0 : kExitDiagnostics;
    }

    if (render->parsed()) {
      CompileResponse response = run(file, Mode::draw, fuel);
      if (!report(response.diagnostics, file)) return kExitDiagnostics;
      writeOutput(output, *response.svg);
      return 0;
    }

    if (frames->parsed()) {
      CompileResponse response = run(file, Mode::animate, fuel, fps, duration);
      if (!report(response.diagnostics, file)) return kExitDiagnostics;
      fs::create_directories(output);
      for (std::size_t k = 0; k < response.frames->size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.svg", k);
        writeOutput((fs::path(output) / name).string(), (*response.frames)[k]);
      }
      std::cerr << response.frames->size() << " frames written to " << output << '\n';
      return 0;
    }

    if (lint->parsed()) {
      std::vector<RubricRule> rubric = defaultRubric();
      if (!rubricPath.empty()) {
        try {
          rubric = loadRubric(readInput(rubricPath));
        } catch (const RubricError& e) {
          throw UsageError(rubricPath + ": " + e.what());
        }
      }
      std::string source = readInput(file);
      AnalysisResult analysis = analyze(source);
      if (!report(analysis.diagnostics, file)) return kExitDiagnostics;
      LintReport lintReport = lintProgram(*analysis.program, rubric);
      std::cout << (lintJson ? reportToJson(lintReport) + "\n"
                             : reportToText(lintReport));
      if (expectedPath.empty()) return 0;
      std::string expected = readInput(expectedPath);
      CompileRequest request;
      request.source = source;
      request.fuel = fuel;
      CompileResponse drawn = compile(request, cliLimits());
      if (!report(drawn.diagnostics, file)) return kExitDiagnostics;
      bool same = withoutComments(*drawn.svg) == withoutComments(expected);
      std::cout << "expected output: " << (same ? "matches " : "differs from ")
                << expectedPath << '\n';
      return same ? 0 : kExitDiagnostics;
    }

    if (serve->parsed()) {
      if (const char* env = std::getenv("FUNCANVAS_PORT")) {
        try {
          port = std::stoi(env);
        } catch (const std::exception&) {
          throw UsageError(std::string("FUNCANVAS_PORT is not a port: ") + env);
        }
      }
      ServerOptions options;
      options.host = host;
      options.port = port;
      if (!staticDir.empty()) options.staticDir = staticDir;
      options.log = &std::cerr;
      Server server(options);
      int bound = server.bind();
      if (bound < 0) throw UsageError("cannot listen on " + host + ":" + std::to_string(port));
      std::cerr << "listening on http://" << host << ':' << bound << '\n';
      return server.serve() ? 0 : kExitDiagnostics;
    }

    if (fmt->parsed()) {
      ParseResult parsed = parseSource(readInput(file));
      if (!report(parsed.diagnostics, file)) return kExitDiagnostics;
      std::string text = formatProgram(parsed.tree);
      writeOutput(inPlace && file != "-" ? file : "", text);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "funcanvas: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RequestError& e) {
    std::cerr << "funcanvas: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "funcanvas: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
