// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/service.hpp"

#include <cmath>

#include "funcanvas/analysis.hpp"
#include "funcanvas/eval.hpp"
#include "funcanvas/render.hpp"
#include "json.hpp"

namespace funcanvas {

using nlohmann::json;

std::string_view toString(Mode mode) {
  switch (mode) {
    case Mode::check:
      return "check";
    case Mode::draw:
      return "draw";
    case Mode::animate:
      return "animate";
  }
  return "?";
}

CompileRequest parseCompileRequest(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw RequestError(400, std::string("request is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw RequestError(400, "request must be a JSON object");
  CompileRequest request;
  if (!doc.contains("source") || !doc["source"].is_string()) {
    throw RequestError(400, "\"source\" must be a string");
  }
  request.source = doc["source"].get<std::string>();
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw RequestError(400, "\"mode\" must be a string");
    std::string mode = doc["mode"];
    if (mode == "check") {
      request.mode = Mode::check;
    } else if (mode == "draw") {
      request.mode = Mode::draw;
    } else if (mode == "animate") {
      request.mode = Mode::animate;
    } else {
      throw RequestError(400, "\"mode\" must be check, draw or animate");
    }
  }
  if (doc.contains("fuel") && !doc["fuel"].is_null()) {
    const json& fuel = doc["fuel"];
    if (!fuel.is_number_unsigned() || fuel.get<uint64_t>() == 0) {
      throw RequestError(400, "\"fuel\" must be a positive whole number");
    }
    request.fuel = fuel.get<uint64_t>();
  }
  auto number = [&](const char* key, double& out) {
    if (!doc.contains(key) || doc[key].is_null()) return;
    if (!doc[key].is_number()) {
      throw RequestError(400, std::string("\"") + key + "\" must be a number");
    }
    out = doc[key].get<double>();
  };
  number("fps", request.fps);
  number("duration", request.duration);
  if (doc.contains("lint") && !doc["lint"].is_null()) {
    if (!doc["lint"].is_boolean()) throw RequestError(400, "\"lint\" must be a boolean");
    request.lint = doc["lint"].get<bool>();
  }
  return request;
}

namespace {

Diagnostic errorAt(std::string code, std::string message) {
  return makeError(std::move(code), std::move(message), {1, 1});
}

void evaluate(const CompileRequest& request, const CompileLimits& limits,
              const TypedProgram& program, const std::string& hash,
              CompileResponse& response) {
  EvalOptions options;
  options.fuel = std::min(request.fuel.value_or(EvalOptions::kDefaultFuel),
                          limits.maxFuel);
  if (limits.wallClock) {
    options.deadline = std::chrono::steady_clock::now() + *limits.wallClock;
  }
  RenderOptions render;
  render.sourceHash = hash;
  Session session(program, options);
  ProgramKind kind = classifyProgram(*session.program());
  if (request.mode == Mode::draw) {
    auto* drawing = std::get_if<Drawing>(&kind);
    if (!drawing) {
      response.diagnostics.push_back(
          {Severity::error, "wrong-mode", "program is an animation, not a drawing",
           {1, 1}, "run it in animate mode"});
      return;
    }
    std::string svg = renderSVG(drawing->picture, render);
    if (svg.size() > limits.maxOutputBytes) {
      response.diagnostics.push_back(
          errorAt("output-too-large", "the drawing is too large to send back"));
      return;
    }
    response.svg = std::move(svg);
    return;
  }
  auto* animation = std::get_if<Animation>(&kind);
  if (!animation) {
    response.diagnostics.push_back(
        {Severity::error, "wrong-mode", "program is a drawing, not an animation",
         {1, 1}, "run it in draw mode"});
    return;
  }
  std::vector<double> times = frameTimes(request.fps, request.duration);
  if (times.size() > limits.maxFrames) {
    response.diagnostics.push_back(errorAt(
        "too-many-frames", "at most " + std::to_string(limits.maxFrames) +
                               " frames can be rendered; lower fps or duration"));
    return;
  }
  std::vector<std::string> frames;
  std::size_t total = 0;
  for (double t : times) {
    frames.push_back(renderSVG(session.frame(animation->function, t), render));
    total += frames.back().size();
    if (total > limits.maxOutputBytes) {
      response.diagnostics.push_back(
          errorAt("output-too-large", "the animation is too large to send back"));
      return;
    }
  }
  response.frames = std::move(frames);
}

}  // namespace

CompileResponse compile(const CompileRequest& request, const CompileLimits& limits) {
  if (request.source.size() > limits.maxSourceBytes) {
    throw RequestError(413, "source is larger than " +
                                std::to_string(limits.maxSourceBytes / 1024) +
                                " KiB");
  }
  CompileResponse response;
  // Everything that may build or drop deep value graphs runs on a big stack.
  runOnLargeStack([&] {
    AnalysisResult analysis = analyze(request.source);
    response.diagnostics = analysis.diagnostics;
    if (!analysis.ok()) return;
    if (request.lint) response.lint = lintProgram(*analysis.program);
    if (request.mode == Mode::check) return;
    try {
      evaluate(request, limits, *analysis.program, sourceHash(request.source),
               response);
    } catch (const RuntimeError& e) {
      response.diagnostics.push_back(e.toDiagnostic());
    } catch (const std::invalid_argument& e) {
      response.diagnostics.push_back(errorAt("invalid-request", e.what()));
    } catch (const std::bad_alloc&) {
      response.diagnostics.push_back(
          errorAt("out-of-memory", "the program needed too much memory"));
    }
  });
  response.ok = !hasErrors(response.diagnostics);
  if (!response.ok) {
    response.svg.reset();
    response.frames.reset();
  }
  return response;
}

std::string responseToJson(const CompileResponse& response) {
  json out;
  out["ok"] = response.ok;
  out["diagnostics"] = json::array();
  for (const Diagnostic& d : response.diagnostics) {
    json entry = {{"severity", toString(d.severity)},
                  {"code", d.code},
                  {"message", d.message},
                  {"line", d.position.line},
                  {"column", d.position.column}};
    if (d.suggestion) entry["suggestion"] = *d.suggestion;
    out["diagnostics"].push_back(std::move(entry));
  }
  if (response.svg) out["svg"] = *response.svg;
  if (response.frames) out["frames"] = *response.frames;
  if (response.lint) out["lint"] = json::parse(reportToJson(*response.lint));
  return out.dump();
}

CompileExchange handleCompile(std::string_view body, const CompileLimits& limits) {
  CompileExchange exchange;
  try {
    CompileRequest request = parseCompileRequest(body);
    exchange.mode = std::string(toString(request.mode));
    exchange.sourceHash = sourceHash(request.source);
    CompileResponse response = compile(request, limits);
    exchange.ok = response.ok;
    exchange.body = responseToJson(response);
  } catch (const RequestError& e) {
    exchange.status = e.status();
    json error = {{"ok", false},
                  {"diagnostics",
                   json::array({{{"severity", "error"},
                                 {"code", e.status() == 413 ? "source-too-large"
                                                            : "bad-request"},
                                 {"message", e.what()},
                                 {"line", 1},
                                 {"column", 1}}})}};
    exchange.body = error.dump();
  }
  return exchange;
}

}  // namespace funcanvas
