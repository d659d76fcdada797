// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "funcanvas/eval.hpp"
#include "funcanvas/picture.hpp"

namespace funcanvas {

inline constexpr const char* kToolName = "funcanvas";
inline constexpr const char* kVersion = "0.1.0";

/// World square [-extent, extent]^2 with y up, mapped onto a pixel canvas
/// with y down. Non-square canvases keep the aspect and center the world.
struct Viewport {
  int width = 500;
  int height = 500;
  double extent = kWorldExtent;

  double scale() const;
  Affine worldToPixel() const;
  Point toPixel(Point world) const { return worldToPixel().apply(world); }
};

struct RenderOptions {
  Viewport viewport;
  std::string sourceHash;  // recorded in the header comment when set
};

/// Deterministic SVG document. Elements appear bottom to top.
std::string renderSVG(const Picture& picture, const RenderOptions& options = {});

struct Drawing {
  Picture picture;
};

struct Animation {
  FunctionValue function;
};

using ProgramKind = std::variant<Drawing, Animation>;

/// Throws std::invalid_argument for values that are not programs.
ProgramKind classifyProgram(const Value& value);

/// t = k / fps for every k with t < duration. Throws std::invalid_argument
/// unless fps > 0 and duration >= 0.
std::vector<double> frameTimes(double fps, double duration);

/// One document per frame time. Runtime errors carry the frame's t.
std::vector<std::string> renderFrames(Session& session,
                                      const Animation& animation, double fps,
                                      double duration,
                                      const RenderOptions& options = {});

/// 64-bit FNV-1a of the source, as 16 hex digits.
std::string sourceHash(std::string_view source);

}  // namespace funcanvas
