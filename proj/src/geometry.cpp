#include "crystalcount/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace crystal {

Box bounding_box(std::span<const Pixel> pixels) {
  Box box;
  if (pixels.empty()) return box;
  box = {pixels.front().x, pixels.front().y, pixels.front().x, pixels.front().y};
  for (const auto& p : pixels) {
    box.x0 = std::min(box.x0, p.x);
    box.y0 = std::min(box.y0, p.y);
    box.x1 = std::max(box.x1, p.x);
    box.y1 = std::max(box.y1, p.y);
  }
  return box;
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Point2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(std::span<const Point2> polygon) {
  if (polygon.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    twice += polygon[j].x * polygon[i].y - polygon[i].x * polygon[j].y;
  }
  return std::abs(twice) / 2.0;
}

namespace {

// Clockwise on screen (y grows downward), starting east.
constexpr std::array<Pixel, 8> kMoore = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int direction_of(const Pixel& from, const Pixel& to) {
  for (int d = 0; d < 8; ++d) {
    if (from.x + kMoore[static_cast<std::size_t>(d)].x == to.x &&
        from.y + kMoore[static_cast<std::size_t>(d)].y == to.y) {
      return d;
    }
  }
  return -1;
}

}  // namespace

std::vector<Pixel> trace_outer_contour(std::span<const Pixel> region) {
  if (region.empty()) return {};
  const Box box = bounding_box(region);
  const int w = box.x1 - box.x0 + 3;
  const int h = box.y1 - box.y0 + 3;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  auto is_in = [&](int x, int y) {
    // Padded local coordinates.
    return inside[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] != 0;
  };
  Pixel start{w, h};
  for (const auto& p : region) {
    const int lx = p.x - box.x0 + 1;
    const int ly = p.y - box.y0 + 1;
    inside[static_cast<std::size_t>(ly) * static_cast<std::size_t>(w) + static_cast<std::size_t>(lx)] = 1;
    if (ly < start.y || (ly == start.y && lx < start.x)) start = {lx, ly};
  }

  // From `cur` with background at direction `back`, find the next boundary
  // pixel clockwise and the background direction as seen from it.
  auto step = [&](const Pixel& cur, int back, int& next_back) -> Pixel {
    for (int i = 1; i <= 8; ++i) {
      const int d = (back + i) % 8;
      const Pixel n{cur.x + kMoore[static_cast<std::size_t>(d)].x,
                    cur.y + kMoore[static_cast<std::size_t>(d)].y};
      if (is_in(n.x, n.y)) {
        next_back = d % 2 == 0 ? (d + 6) % 8 : (d + 5) % 8;
        return n;
      }
    }
    next_back = back;
    return cur;
  };

  std::vector<Pixel> contour{start};
  int back = 4;  // west of the first raster pixel is background
  int next_back = 0;
  const Pixel first = step(start, back, next_back);
  if (first == start) {
    contour.front() = {start.x - 1 + box.x0, start.y - 1 + box.y0};
    return contour;
  }
  Pixel cur = first;
  back = next_back;
  const std::size_t limit = 8 * region.size() + 8;
  while (contour.size() <= limit) {
    const Pixel next = step(cur, back, next_back);
    if (cur == start && next == first) break;
    contour.push_back(cur);
    cur = next;
    back = next_back;
  }
  for (auto& p : contour) p = {p.x - 1 + box.x0, p.y - 1 + box.y0};
  return contour;
}

double contour_perimeter(std::span<const Pixel> contour) {
  const std::size_t n = contour.size();
  if (n < 2) return 0.0;
  std::vector<int> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = direction_of(contour[i], contour[(i + 1) % n]);
  int even = 0;
  int odd = 0;
  int corners = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (codes[i] % 2 == 0) {
      ++even;
    } else {
      ++odd;
    }
    if (codes[i] != codes[(i + 1) % n]) ++corners;
  }
  return 0.980 * even + 1.406 * odd - 0.091 * corners;
}

namespace {

constexpr double kCircleEps = 1e-7;

bool covers(const Circle& c, const Point2& p) {
  return std::hypot(p.x - c.center.x, p.y - c.center.y) <= c.radius + kCircleEps;
}

Circle circle_from(const Point2& a, const Point2& b) {
  const Point2 mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
  return {mid, std::hypot(a.x - mid.x, a.y - mid.y)};
}

Circle circle_from(const Point2& a, const Point2& b, const Point2& c) {
  const double bx = b.x - a.x;
  const double by = b.y - a.y;
  const double cx = c.x - a.x;
  const double cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  if (std::abs(d) < 1e-12) {
    // Collinear: the widest pair spans all three.
    Circle best = circle_from(a, b);
    for (const Circle& alt : {circle_from(a, c), circle_from(b, c)}) {
      if (alt.radius > best.radius) best = alt;
    }
    return best;
  }
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const Point2 center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
  return {center, std::hypot(a.x - center.x, a.y - center.y)};
}

}  // namespace

Circle min_enclosing_circle(std::span<const Point2> input) {
  if (input.empty()) return {};
  std::vector<Point2> points(input.begin(), input.end());
  std::mt19937 rng(0x5eed);
  std::shuffle(points.begin(), points.end(), rng);

  Circle c{points[0], 0.0};
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (covers(c, points[i])) continue;
    c = {points[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (covers(c, points[j])) continue;
      c = circle_from(points[i], points[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!covers(c, points[k])) c = circle_from(points[i], points[j], points[k]);
      }
    }
  }
  return c;
}

std::vector<Point2> to_points(std::span<const Pixel> pixels) {
  std::vector<Point2> points;
  points.reserve(pixels.size());
  for (const auto& p : pixels) points.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return points;
}

}  // namespace crystal
