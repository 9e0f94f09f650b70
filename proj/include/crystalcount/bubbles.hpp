#pragma once

#include <vector>

#include "crystalcount/image.hpp"

namespace crystal {

struct BubbleParams {
  double min_equiv_diameter = 60.0;
  double min_circularity = 0.80;
  int margin = 5;
  int dark_threshold_offset = 10;
  /// Window of the dark-region threshold.
  int block = 63;

  void validate() const;
};

/// An air bubble or dust ring, described by its minimum enclosing circle.
struct BubbleRegion {
  Point2 center;
  double radius = 0.0;
  double area_px = 0.0;
  double circularity = 0.0;
};

/// Dark regions (holes filled) that are both large and round enough.
std::vector<BubbleRegion> detect_bubbles(const GrayImage& image, const BubbleParams& params = {});

/// Union of the bubbles' enclosing disks grown by `margin`, clipped to `dims`.
BinaryMask exclusion_mask(const std::vector<BubbleRegion>& bubbles, Dims dims, int margin);

}  // namespace crystal
