#pragma once

#include <span>
#include <vector>

#include "crystalcount/image.hpp"

namespace crystal {

/// Inclusive pixel bounding box.
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool empty() const noexcept { return x1 < x0 || y1 < y0; }
  bool intersects(const Box& o) const noexcept {
    return !empty() && !o.empty() && x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

Box bounding_box(std::span<const Pixel> pixels);

/// Counter-clockwise hull (monotone chain); collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Absolute shoelace area.
double polygon_area(std::span<const Point2> polygon);

/// Moore-neighbour trace of the outer boundary of an 8-connected region,
/// starting at its first pixel in raster order. The result is the closed
/// boundary sequence without the repeated start pixel.
std::vector<Pixel> trace_outer_contour(std::span<const Pixel> region);

/// Length of a closed 8-connected boundary estimated from its chain code
/// with the corner-count weights 0.980 / 1.406 / -0.091, which removes most
/// of the digitisation bias of a plain step count.
double contour_perimeter(std::span<const Pixel> contour);

struct Circle {
  Point2 center;
  double radius = 0.0;
};

/// Smallest circle containing every point (randomized incremental, fixed
/// seed, so the result is deterministic).
Circle min_enclosing_circle(std::span<const Point2> points);

std::vector<Point2> to_points(std::span<const Pixel> pixels);

}  // namespace crystal
