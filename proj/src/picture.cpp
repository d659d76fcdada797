// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/picture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "funcanvas/number_format.hpp"

namespace funcanvas {

namespace {

const std::map<std::string, Rgba>& palette() {
  static const std::map<std::string, Rgba> colors = {
      {"black", {0, 0, 0, 1}},        {"blue", {0.1, 0.3, 0.9, 1}},
      {"brown", {0.55, 0.3, 0.1, 1}}, {"green", {0.1, 0.6, 0.2, 1}},
      {"grey", {0.5, 0.5, 0.5, 1}},   {"orange", {1, 0.55, 0, 1}},
      {"pink", {1, 0.6, 0.75, 1}},    {"purple", {0.5, 0.2, 0.7, 1}},
      {"red", {0.9, 0.1, 0.1, 1}},    {"white", {1, 1, 1, 1}},
      {"yellow", {1, 0.85, 0.1, 1}},
  };
  return colors;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void requireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw PictureError(std::string(what) + " must be a finite number");
  }
}

// Exact values at multiples of 90 degrees keep axis-aligned output exact.
std::pair<double, double> cosSinDegrees(double degrees) {
  double turn = std::fmod(degrees, 360.0);
  if (turn < 0) turn += 360.0;
  if (turn == 0) return {1, 0};
  if (turn == 90) return {0, 1};
  if (turn == 180) return {-1, 0};
  if (turn == 270) return {0, -1};
  double radians = turn * std::numbers::pi / 180.0;
  return {std::cos(radians), std::sin(radians)};
}

std::size_t codePoints(const std::string& s) {
  return std::count_if(s.begin(), s.end(), [](char ch) {
    return (static_cast<unsigned char>(ch) & 0xC0) != 0x80;
  });
}

std::shared_ptr<PictureNode> makeNode(Shape shape) {
  auto node = std::make_shared<PictureNode>();
  node->shape = shape;
  return node;
}

}  // namespace

// ---------------------------------------------------------------------------
// Color

Color Color::named(const std::string& name) {
  auto it = palette().find(name);
  if (it == palette().end()) throw PictureError("unknown color '" + name + "'");
  Color c;
  c.kind_ = Kind::named;
  c.name_ = name;
  c.channels_ = it->second;
  return c;
}

Color Color::grey(double level) {
  requireFinite(level, "grey level");
  Color c;
  c.kind_ = Kind::grey;
  double v = clamp01(level);
  c.channels_ = {v, v, v, 1};
  return c;
}

Color Color::translucent(const Color& base) {
  Color c;
  c.kind_ = Kind::translucent;
  c.base_ = std::make_shared<const Color>(base);
  c.channels_ = base.resolve();
  c.channels_.a *= 0.5;
  return c;
}

Color Color::rgba(double r, double g, double b, double a) {
  for (double v : {r, g, b, a}) requireFinite(v, "color channel");
  Color c;
  c.kind_ = Kind::rgba;
  c.channels_ = {clamp01(r), clamp01(g), clamp01(b), clamp01(a)};
  return c;
}

bool Color::isNamed(const std::string& name) {
  return palette().count(name) > 0;
}

Rgba Color::resolve() const { return channels_; }

std::string Color::describe() const {
  switch (kind_) {
    case Kind::named:
      return name_;
    case Kind::grey:
      return "grey(" + formatNumber(channels_.r) + ")";
    case Kind::translucent:
      return "translucent(" + base_->describe() + ")";
    case Kind::rgba:
      break;
  }
  return "rgba(" + formatNumber(channels_.r) + ", " +
         formatNumber(channels_.g) + ", " + formatNumber(channels_.b) + ", " +
         formatNumber(channels_.a) + ")";
}

bool Color::operator==(const Color& other) const {
  if (kind_ != other.kind_ || name_ != other.name_ ||
      !(channels_ == other.channels_)) {
    return false;
  }
  if (!base_ || !other.base_) return base_ == other.base_;
  return *base_ == *other.base_;
}

// ---------------------------------------------------------------------------
// Affine

Affine Affine::translation(double dx, double dy) {
  return {1, 0, 0, 1, dx, dy};
}

Affine Affine::rotation(double degrees) {
  auto [c, s] = cosSinDegrees(degrees);
  return {c, s, -s, c, 0, 0};
}

Affine Affine::scaling(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }

Affine Affine::then(const Affine& m) const {
  return {a * m.a + c * m.b, b * m.a + d * m.b, a * m.c + c * m.d,
          b * m.c + d * m.d, a * m.e + c * m.f + e, b * m.e + d * m.f + f};
}

Point Affine::apply(Point p) const {
  return {a * p.x + c * p.y + e, b * p.x + d * p.y + f};
}

// ---------------------------------------------------------------------------
// Picture

PictureNode::~PictureNode() {
  std::vector<PictureRef> pending;
  auto steal = [&pending](PictureRef& child) {
    if (child && child.use_count() == 1) pending.push_back(std::move(child));
  };
  steal(first);
  steal(second);
  while (!pending.empty()) {
    PictureRef node = std::move(pending.back());
    pending.pop_back();
    // Sole owner: detach grandchildren before the node goes away.
    auto& owned = const_cast<PictureNode&>(*node);
    steal(owned.first);
    steal(owned.second);
  }
}

Picture::Picture() {
  static const PictureRef empty = makeNode(Shape::empty);
  node_ = empty;
}

Picture Picture::circle(double radius, bool filled) {
  requireFinite(radius, "radius");
  if (radius < 0) throw PictureError("radius must not be negative");
  auto node = makeNode(Shape::circle);
  node->filled = filled;
  node->params[0] = radius;
  return Picture(std::move(node));
}

Picture Picture::rectangle(double width, double height, bool filled) {
  requireFinite(width, "width");
  requireFinite(height, "height");
  if (width < 0 || height < 0) {
    throw PictureError("rectangle sides must not be negative");
  }
  auto node = makeNode(Shape::rectangle);
  node->filled = filled;
  node->params[0] = width;
  node->params[1] = height;
  return Picture(std::move(node));
}

Picture Picture::polygon(std::vector<Point> points, bool filled) {
  if (points.size() < 3) {
    throw PictureError("a polygon needs at least 3 points, got " +
                       std::to_string(points.size()));
  }
  for (const Point& p : points) {
    requireFinite(p.x, "polygon coordinate");
    requireFinite(p.y, "polygon coordinate");
  }
  auto node = makeNode(Shape::polygon);
  node->filled = filled;
  node->points = std::move(points);
  return Picture(std::move(node));
}

Picture Picture::sector(double startDegrees, double endDegrees,
                        double radius) {
  requireFinite(startDegrees, "sector angle");
  requireFinite(endDegrees, "sector angle");
  requireFinite(radius, "radius");
  if (radius < 0) throw PictureError("radius must not be negative");
  auto node = makeNode(Shape::sector);
  node->filled = true;
  node->params = {startDegrees, endDegrees, radius};
  return Picture(std::move(node));
}

Picture Picture::lettering(std::string text) {
  auto node = makeNode(Shape::lettering);
  node->filled = true;
  node->text = std::move(text);
  return Picture(std::move(node));
}

Picture Picture::coordinatePlane() {
  return Picture(makeNode(Shape::coordinatePlane));
}

Picture Picture::translated(double dx, double dy) const {
  requireFinite(dx, "translation");
  requireFinite(dy, "translation");
  auto node = makeNode(Shape::translated);
  node->params[0] = dx;
  node->params[1] = dy;
  node->first = node_;
  return Picture(std::move(node));
}

Picture Picture::rotated(double degrees) const {
  requireFinite(degrees, "rotation");
  auto node = makeNode(Shape::rotated);
  node->params[0] = degrees;
  node->first = node_;
  return Picture(std::move(node));
}

Picture Picture::scaled(double sx, double sy) const {
  requireFinite(sx, "scale factor");
  requireFinite(sy, "scale factor");
  auto node = makeNode(Shape::scaled);
  node->params[0] = sx;
  node->params[1] = sy;
  node->first = node_;
  return Picture(std::move(node));
}

Picture Picture::dilated(double k) const {
  requireFinite(k, "dilation factor");
  auto node = makeNode(Shape::dilated);
  node->params[0] = k;
  node->first = node_;
  return Picture(std::move(node));
}

Picture Picture::colored(const Color& color) const {
  auto node = makeNode(Shape::colored);
  node->color = color;
  node->first = node_;
  return Picture(std::move(node));
}

std::size_t Picture::size() const {
  std::size_t count = 0;
  std::vector<const PictureNode*> stack{node_.get()};
  while (!stack.empty()) {
    const PictureNode* n = stack.back();
    stack.pop_back();
    ++count;
    if (n->first) stack.push_back(n->first.get());
    if (n->second) stack.push_back(n->second.get());
  }
  return count;
}

Picture overlay(const Picture& top, const Picture& bottom) {
  auto node = makeNode(Shape::overlay);
  node->first = top.ref();
  node->second = bottom.ref();
  return Picture(std::move(node));
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

class BoxBuilder {
 public:
  void add(Point p) {
    if (!box_) {
      box_ = BoundingBox{p.x, p.y, p.x, p.y};
      return;
    }
    box_->xmin = std::min(box_->xmin, p.x);
    box_->ymin = std::min(box_->ymin, p.y);
    box_->xmax = std::max(box_->xmax, p.x);
    box_->ymax = std::max(box_->ymax, p.y);
  }

  void addRect(const Affine& m, double halfW, double halfH) {
    for (Point corner : {Point{-halfW, -halfH}, Point{halfW, -halfH},
                         Point{halfW, halfH}, Point{-halfW, halfH}}) {
      add(m.apply(corner));
    }
  }

  void addCircle(const Affine& m, double r) {
    double rx = r * std::hypot(m.a, m.c);
    double ry = r * std::hypot(m.b, m.d);
    add({m.e - rx, m.f - ry});
    add({m.e + rx, m.f + ry});
  }

  void addSector(const Affine& m, double start, double end, double r) {
    if (end < start) std::swap(start, end);
    if (end - start >= 360) {
      addCircle(m, r);
      return;
    }
    auto onArc = [&](double degrees) {
      auto [c, s] = cosSinDegrees(degrees);
      return m.apply({r * c, r * s});
    };
    add(m.apply({0, 0}));
    add(onArc(start));
    add(onArc(end));
    // Extremes of x and y along the full transformed circle, kept when they
    // fall inside the swept range.
    double candidates[] = {std::atan2(m.c, m.a), std::atan2(m.d, m.b)};
    for (double radians : candidates) {
      for (double degrees : {radians * 180 / std::numbers::pi,
                             radians * 180 / std::numbers::pi + 180}) {
        double offset = std::fmod(degrees - start, 360.0);
        if (offset < 0) offset += 360.0;
        if (offset <= end - start) add(onArc(degrees));
      }
    }
  }

  const std::optional<BoundingBox>& result() const { return box_; }

 private:
  std::optional<BoundingBox> box_;
};

}  // namespace

std::optional<BoundingBox> boundingBox(const Picture& picture) {
  BoxBuilder box;
  std::vector<std::pair<const PictureNode*, Affine>> stack{
      {&picture.node(), Affine{}}};
  while (!stack.empty()) {
    auto [n, m] = stack.back();
    stack.pop_back();
    const auto& p = n->params;
    switch (n->shape) {
      case Shape::empty:
        break;
      case Shape::circle:
        box.addCircle(m, p[0]);
        break;
      case Shape::rectangle:
        box.addRect(m, p[0] / 2, p[1] / 2);
        break;
      case Shape::polygon:
        for (Point q : n->points) box.add(m.apply(q));
        break;
      case Shape::sector:
        box.addSector(m, p[0], p[1], p[2]);
        break;
      case Shape::lettering:
        box.addRect(m,
                    kLetteringAdvance * static_cast<double>(codePoints(n->text)) / 2,
                    kLetteringHeight / 2);
        break;
      case Shape::coordinatePlane:
        box.addRect(m, kWorldExtent, kWorldExtent);
        break;
      case Shape::translated:
        stack.push_back({n->first.get(), m.then(Affine::translation(p[0], p[1]))});
        break;
      case Shape::rotated:
        stack.push_back({n->first.get(), m.then(Affine::rotation(p[0]))});
        break;
      case Shape::scaled:
        stack.push_back({n->first.get(), m.then(Affine::scaling(p[0], p[1]))});
        break;
      case Shape::dilated:
        stack.push_back({n->first.get(), m.then(Affine::scaling(p[0], p[0]))});
        break;
      case Shape::colored:
        stack.push_back({n->first.get(), m});
        break;
      case Shape::overlay:
        stack.push_back({n->first.get(), m});
        stack.push_back({n->second.get(), m});
        break;
    }
  }
  return box.result();
}

bool samePicture(const Picture& a, const Picture& b) {
  std::vector<std::pair<const PictureNode*, const PictureNode*>> stack{
      {&a.node(), &b.node()}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (x == y) continue;
    if (!x || !y) return false;
    if (x->shape != y->shape || x->filled != y->filled ||
        x->params != y->params || x->points != y->points ||
        x->text != y->text || x->color != y->color) {
      return false;
    }
    stack.push_back({x->first.get(), y->first.get()});
    stack.push_back({x->second.get(), y->second.get()});
  }
  return true;
}

}  // namespace funcanvas
