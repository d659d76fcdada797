// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace funcanvas {

struct Rgba {
  double r = 0, g = 0, b = 0, a = 1;

  bool operator==(const Rgba&) const = default;
};

class Color {
 public:
  enum class Kind { named, grey, translucent, rgba };

  static Color named(const std::string& name);  // throws on unknown names
  static Color grey(double level);
  static Color translucent(const Color& base);
  static Color rgba(double r, double g, double b, double a);

  static bool isNamed(const std::string& name);

  Kind kind() const { return kind_; }
  Rgba resolve() const;
  std::string describe() const;

  bool operator==(const Color& other) const;

 private:
  Kind kind_ = Kind::named;
  std::string name_;
  Rgba channels_;
  std::shared_ptr<const Color> base_;
};

struct Point {
  double x = 0, y = 0;

  bool operator==(const Point&) const = default;
};

/// Row-major 2x3 affine map in the SVG convention:
/// (x, y) -> (a x + c y + e, b x + d y + f).
struct Affine {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  static Affine translation(double dx, double dy);
  static Affine rotation(double degrees);
  static Affine scaling(double sx, double sy);

  Affine then(const Affine& inner) const;  // this * inner
  Point apply(Point p) const;
  double determinant() const { return a * d - b * c; }
};

enum class Shape {
  empty,
  circle,
  rectangle,
  polygon,
  sector,
  lettering,
  coordinatePlane,
  translated,
  rotated,
  scaled,
  dilated,
  colored,
  overlay,
};

struct PictureNode;
using PictureRef = std::shared_ptr<const PictureNode>;

/// One scene-tree node. Which fields are meaningful depends on `shape`:
///   circle      params[0] = radius
///   rectangle   params[0..1] = width, height
///   sector      params[0..2] = start degrees, end degrees, radius
///   translated  params[0..1] = dx, dy
///   rotated     params[0] = degrees
///   scaled      params[0..1] = sx, sy
///   dilated     params[0] = k
///   overlay     first = top, second = bottom
struct PictureNode {
  Shape shape = Shape::empty;
  bool filled = false;
  std::array<double, 3> params{};
  std::vector<Point> points;
  std::string text;
  std::optional<Color> color;
  PictureRef first;
  PictureRef second;

  PictureNode() = default;
  PictureNode(const PictureNode&) = delete;
  PictureNode& operator=(const PictureNode&) = delete;
  // Long overlay chains would otherwise recurse once per node.
  ~PictureNode();
};

class PictureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BoundingBox {
  double xmin, ymin, xmax, ymax;

  bool operator==(const BoundingBox&) const = default;
};

class Picture {
 public:
  Picture();  // empty

  static Picture circle(double radius, bool filled);
  static Picture rectangle(double width, double height, bool filled);
  static Picture polygon(std::vector<Point> points, bool filled);
  static Picture sector(double startDegrees, double endDegrees, double radius);
  static Picture lettering(std::string text);
  static Picture coordinatePlane();

  Picture translated(double dx, double dy) const;
  Picture rotated(double degrees) const;
  Picture scaled(double sx, double sy) const;
  Picture dilated(double k) const;
  Picture colored(const Color& color) const;

  const PictureNode& node() const { return *node_; }
  const PictureRef& ref() const { return node_; }
  bool isEmpty() const { return node_->shape == Shape::empty; }

  /// Node count, computed without recursion.
  std::size_t size() const;

 private:
  explicit Picture(PictureRef node) : node_(std::move(node)) {}
  friend Picture overlay(const Picture& top, const Picture& bottom);

  PictureRef node_;
};

/// `top & bottom`.
Picture overlay(const Picture& top, const Picture& bottom);

/// Tight box of primitive geometry after transforms. Stroke widths are not
/// included. Lettering is taken as 0.5 units per character by 1 unit high.
std::optional<BoundingBox> boundingBox(const Picture& picture);

/// Scene-tree equality (exact numbers).
bool samePicture(const Picture& a, const Picture& b);

inline constexpr double kWorldExtent = 10.0;
inline constexpr double kLetteringHeight = 1.0;
inline constexpr double kLetteringAdvance = 0.5;
inline constexpr double kOutlineWidth = 0.1;
inline constexpr double kGridLineWidth = 0.02;

}  // namespace funcanvas
