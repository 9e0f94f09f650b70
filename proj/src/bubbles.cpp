#include "crystalcount/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crystalcount/geometry.hpp"
#include "crystalcount/raster.hpp"

namespace crystal {

void BubbleParams::validate() const {
  if (!(min_circularity > 0.0 && min_circularity <= 1.0)) {
    throw Error(Errc::InvalidParameter, "min_circularity must lie in (0, 1]");
  }
  if (margin < 0) throw Error(Errc::InvalidParameter, "margin must be >= 0");
  if (!(min_equiv_diameter >= 0.0)) throw Error(Errc::InvalidParameter, "min_equiv_diameter must be >= 0");
  if (block < 3 || block % 2 == 0) throw Error(Errc::InvalidParameter, "bubble block must be odd and >= 3");
}

std::vector<BubbleRegion> detect_bubbles(const GrayImage& image, const BubbleParams& params) {
  params.validate();
  const BinaryMask dark = adaptive_threshold(image, params.block, params.dark_threshold_offset);
  const BinaryMask filled = flood_background(dark);
  const LabelMap labels = connected_components(filled, Connectivity::Eight);

  std::vector<BubbleRegion> bubbles;
  for (const auto& region : label_regions(labels)) {
    const double area = static_cast<double>(region.size());
    const double diameter = 2.0 * std::sqrt(area / std::numbers::pi);
    if (diameter < params.min_equiv_diameter) continue;
    const auto contour = trace_outer_contour(region);
    const double perimeter = contour_perimeter(contour);
    if (!(perimeter > 0.0)) continue;
    const double circularity = 4.0 * std::numbers::pi * area / (perimeter * perimeter);
    if (circularity < params.min_circularity) continue;
    // The enclosing circle only depends on the boundary.
    const auto points = to_points(contour);
    const Circle circle = min_enclosing_circle(convex_hull(points));
    if (!(circle.radius > 0.0)) continue;
    bubbles.push_back({circle.center, circle.radius, area, circularity});
  }
  return bubbles;
}

BinaryMask exclusion_mask(const std::vector<BubbleRegion>& bubbles, Dims dims, int margin) {
  if (margin < 0) throw Error(Errc::InvalidParameter, "margin must be >= 0");
  BinaryMask mask(dims);
  for (const auto& b : bubbles) {
    const double r = b.radius + margin;
    const int y0 = std::max(0, static_cast<int>(std::floor(b.center.y - r)));
    const int y1 = std::min(dims.height - 1, static_cast<int>(std::ceil(b.center.y + r)));
    const int x0 = std::max(0, static_cast<int>(std::floor(b.center.x - r)));
    const int x1 = std::min(dims.width - 1, static_cast<int>(std::ceil(b.center.x + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - b.center.x;
        const double dy = y - b.center.y;
        if (dx * dx + dy * dy <= r * r) mask(x, y) = 1;
      }
    }
  }
  return mask;
}

}  // namespace crystal
