// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "funcanvas/number_format.hpp"

namespace funcanvas {

double Viewport::scale() const {
  return std::min(width, height) / (2 * extent);
}

Affine Viewport::worldToPixel() const {
  double s = scale();
  return {s, 0, 0, -s, width / 2.0, height / 2.0};
}

std::string sourceHash(std::string_view source) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : source) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string num(double v) { return formatNumber(v); }

std::string hexColor(const Rgba& c) {
  char buf[8];
  auto channel = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255));
  };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(c.r), channel(c.g),
                channel(c.b));
  return buf;
}

std::string escapeXml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

double degrees(double radians) { return radians * 180 / std::numbers::pi; }

class SvgWriter {
 public:
  explicit SvgWriter(const RenderOptions& options)
      : viewport_(options.viewport), pixel_(viewport_.worldToPixel()) {
    const Viewport& v = viewport_;
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
            std::to_string(v.width) + "\" height=\"" + std::to_string(v.height) +
            "\" viewBox=\"0 0 " + std::to_string(v.width) + " " +
            std::to_string(v.height) + "\">\n";
    out_ += std::string("<!-- ") + kToolName + " " + kVersion;
    if (!options.sourceHash.empty()) out_ += " source " + options.sourceHash;
    out_ += " -->\n";
  }

  std::string finish() { return std::move(out_) + "</svg>\n"; }

  void draw(const Picture& picture) {
    struct Item {
      const PictureNode* node;
      Affine m;
      const Color* color;
    };
    std::vector<Item> stack{{&picture.node(), Affine{}, nullptr}};
    while (!stack.empty()) {
      Item item = stack.back();
      stack.pop_back();
      const PictureNode* n = item.node;
      const auto& p = n->params;
      switch (n->shape) {
        case Shape::empty:
          break;
        case Shape::translated: {
          // Nested translations are summed before composing, so that
          // translated(translated(q, a, b), c, d) matches
          // translated(q, a + c, b + d) exactly.
          double dx = p[0], dy = p[1];
          const PictureNode* child = n->first.get();
          while (child->shape == Shape::translated) {
            dx = child->params[0] + dx;
            dy = child->params[1] + dy;
            child = child->first.get();
          }
          stack.push_back({child, item.m.then(Affine::translation(dx, dy)),
                           item.color});
          break;
        }
        case Shape::rotated: {
          double total = p[0];
          const PictureNode* child = n->first.get();
          while (child->shape == Shape::rotated) {
            total = child->params[0] + total;
            child = child->first.get();
          }
          stack.push_back({child, item.m.then(Affine::rotation(total)),
                           item.color});
          break;
        }
        case Shape::scaled:
          stack.push_back({n->first.get(),
                           item.m.then(Affine::scaling(p[0], p[1])), item.color});
          break;
        case Shape::dilated:
          stack.push_back({n->first.get(),
                           item.m.then(Affine::scaling(p[0], p[0])), item.color});
          break;
        case Shape::colored:
          stack.push_back({n->first.get(), item.m, &*n->color});
          break;
        case Shape::overlay:
          stack.push_back({n->first.get(), item.m, item.color});
          stack.push_back({n->second.get(), item.m, item.color});
          break;
        default:
          primitive(*n, pixel_.then(item.m), item.color);
      }
    }
  }

 private:
  std::string paint(const PictureNode& n, const Color* color) const {
    Rgba c = color ? color->resolve() : Rgba{0, 0, 0, 1};
    std::string attrs;
    if (n.filled) {
      attrs = " fill=\"" + hexColor(c) + "\"";
      if (c.a < 1) attrs += " fill-opacity=\"" + num(c.a) + "\"";
    } else {
      attrs = " fill=\"none\" stroke=\"" + hexColor(c) + "\" stroke-width=\"" +
              num(kOutlineWidth * viewport_.scale()) + "\"";
      if (c.a < 1) attrs += " stroke-opacity=\"" + num(c.a) + "\"";
    }
    return attrs;
  }

  void polygonElement(const std::vector<Point>& pts, const std::string& attrs) {
    out_ += "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) out_ += ' ';
      out_ += num(pts[i].x) + "," + num(pts[i].y);
    }
    out_ += "\"" + attrs + "/>\n";
  }

  void primitive(const PictureNode& n, const Affine& m, const Color* color) {
    const auto& p = n.params;
    switch (n.shape) {
      case Shape::circle:
        ellipse(m, p[0], paint(n, color));
        break;
      case Shape::rectangle:
        rectangle(m, p[0], p[1], paint(n, color));
        break;
      case Shape::polygon: {
        std::vector<Point> pts;
        for (Point q : n.points) pts.push_back(m.apply(q));
        polygonElement(pts, paint(n, color));
        break;
      }
      case Shape::sector:
        sector(m, p[0], p[1], p[2], paint(n, color));
        break;
      case Shape::lettering: {
        // Text runs in a y-down local frame.
        Affine t = m.then(Affine::scaling(1, -1));
        out_ += "<text transform=\"matrix(" + num(t.a) + " " + num(t.b) + " " +
                num(t.c) + " " + num(t.d) + " " + num(t.e) + " " + num(t.f) +
                ")\" font-family=\"sans-serif\" font-size=\"" +
                num(kLetteringHeight) +
                "\" text-anchor=\"middle\" dominant-baseline=\"central\"" +
                paint(n, color) + ">" + escapeXml(n.text) + "</text>\n";
        break;
      }
      case Shape::coordinatePlane:
        coordinatePlane(m);
        break;
      default:
        break;
    }
  }

  void ellipse(const Affine& m, double r, const std::string& attrs) {
    std::string center = "cx=\"" + num(m.e) + "\" cy=\"" + num(m.f) + "\"";
    bool similarity = (m.a == m.d && m.b == -m.c) || (m.a == -m.d && m.b == m.c);
    if (similarity) {
      out_ += "<circle " + center + " r=\"" + num(r * std::hypot(m.a, m.b)) +
              "\"" + attrs + "/>\n";
      return;
    }
    // Singular values and the left rotation of the linear part give the
    // ellipse's radii and orientation.
    double e = (m.a + m.d) / 2, f = (m.a - m.d) / 2;
    double g = (m.b + m.c) / 2, h = (m.b - m.c) / 2;
    double q = std::hypot(e, h), s = std::hypot(f, g);
    double rx = r * (q + s), ry = r * std::fabs(q - s);
    double phi = (std::atan2(h, e) + std::atan2(g, f)) / 2;
    std::string transform;
    double angle = degrees(phi);
    if (angle != 0) {
      transform = " transform=\"rotate(" + num(angle) + " " + num(m.e) + " " +
                  num(m.f) + ")\"";
    }
    out_ += "<ellipse " + center + " rx=\"" + num(rx) + "\" ry=\"" + num(ry) +
            "\"" + transform + attrs + "/>\n";
  }

  void rectangle(const Affine& m, double w, double h, const std::string& attrs) {
    Point u{m.a, m.b}, v{m.c, m.d};
    bool axisAligned = (u.y == 0 && v.x == 0) || (u.x == 0 && v.y == 0);
    if (axisAligned) {
      double width = std::fabs(u.x) * w + std::fabs(v.x) * h;
      double height = std::fabs(u.y) * w + std::fabs(v.y) * h;
      out_ += "<rect x=\"" + num(m.e - width / 2) + "\" y=\"" +
              num(m.f - height / 2) + "\" width=\"" + num(width) +
              "\" height=\"" + num(height) + "\"" + attrs + "/>\n";
      return;
    }
    double lu = std::hypot(u.x, u.y), lv = std::hypot(v.x, v.y);
    if (std::fabs(u.x * v.x + u.y * v.y) <= 1e-12 * lu * lv) {
      double width = lu * w, height = lv * h;
      out_ += "<rect x=\"" + num(m.e - width / 2) + "\" y=\"" +
              num(m.f - height / 2) + "\" width=\"" + num(width) +
              "\" height=\"" + num(height) + "\" transform=\"rotate(" +
              num(degrees(std::atan2(u.y, u.x))) + " " + num(m.e) + " " +
              num(m.f) + ")\"" + attrs + "/>\n";
      return;
    }
    // Sheared: no longer a rectangle.
    polygonElement({m.apply({-w / 2, -h / 2}), m.apply({w / 2, -h / 2}),
                    m.apply({w / 2, h / 2}), m.apply({-w / 2, h / 2})},
                   attrs);
  }

  void sector(const Affine& m, double start, double end, double r,
              const std::string& attrs) {
    double sweep = std::clamp(end - start, -360.0, 360.0);
    int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(sweep) / 5)));
    std::vector<Point> pts{m.apply({0, 0})};
    for (int i = 0; i <= steps; ++i) {
      double radians = (start + sweep * i / steps) * std::numbers::pi / 180;
      pts.push_back(m.apply({r * std::cos(radians), r * std::sin(radians)}));
    }
    polygonElement(pts, attrs);
  }

  void line(const Affine& m, Point a, Point b, const char* stroke) {
    Point pa = m.apply(a), pb = m.apply(b);
    out_ += "<line x1=\"" + num(pa.x) + "\" y1=\"" + num(pa.y) + "\" x2=\"" +
            num(pb.x) + "\" y2=\"" + num(pb.y) + "\" stroke=\"" + stroke +
            "\" stroke-width=\"" + num(kGridLineWidth * viewport_.scale()) +
            "\"/>\n";
  }

  void coordinatePlane(const Affine& m) {
    const int k = static_cast<int>(kWorldExtent);
    const double x = kWorldExtent;
    for (int i = -k; i <= k; ++i) {
      line(m, {double(i), -x}, {double(i), x}, "#d0d0d0");
      line(m, {-x, double(i)}, {x, double(i)}, "#d0d0d0");
    }
    line(m, {-x, 0}, {x, 0}, "#000000");
    line(m, {0, -x}, {0, x}, "#000000");
    for (int i = -k; i <= k; ++i) {
      if (i == 0) continue;
      line(m, {double(i), -0.2}, {double(i), 0.2}, "#000000");
      line(m, {-0.2, double(i)}, {0.2, double(i)}, "#000000");
    }
  }

  Viewport viewport_;
  Affine pixel_;
  std::string out_;
};

}  // namespace

std::string renderSVG(const Picture& picture, const RenderOptions& options) {
  SvgWriter writer(options);
  writer.draw(picture);
  return writer.finish();
}

ProgramKind classifyProgram(const Value& value) {
  const auto* program = std::get_if<ProgramValue>(&value);
  if (!program) throw std::invalid_argument("value is not a program");
  if (program->drawing) return Drawing{*program->drawing};
  return Animation{*program->animation};
}

std::vector<double> frameTimes(double fps, double duration) {
  if (!(fps > 0) || !std::isfinite(fps)) {
    throw std::invalid_argument("fps must be a positive number");
  }
  if (!(duration >= 0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must not be negative");
  }
  std::vector<double> times;
  for (double k = 0;; ++k) {
    double t = k / fps;
    if (!(t < duration)) break;
    times.push_back(t);
  }
  return times;
}

std::vector<std::string> renderFrames(Session& session,
                                      const Animation& animation, double fps,
                                      double duration,
                                      const RenderOptions& options) {
  std::vector<std::string> frames;
  for (double t : frameTimes(fps, duration)) {
    frames.push_back(renderSVG(session.frame(animation.function, t), options));
  }
  return frames;
}

}  // namespace funcanvas
