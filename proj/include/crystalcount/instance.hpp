#pragma once

#include <span>
#include <vector>

#include "crystalcount/image.hpp"

namespace crystal {

/// One detected cluster. `crystal_count` is how many crystals the cluster is
/// taken to contain: one, or the number of openings when it has several.
struct CrystalInstance {
  int id = 0;
  double area_px = 0.0;
  Point2 centroid;
  int hole_count = 0;
  int crystal_count = 1;
  std::vector<Point2> boundary;
};

/// Fills area, centroid and the traced outer boundary from the pixel set.
CrystalInstance make_instance(int id, std::span<const Pixel> region, int hole_count);

/// True when any foreground pixel of `mask` lies inside the bounding box of
/// `region`. An empty (default-constructed) mask never intersects.
bool bbox_touches(const BinaryMask& mask, std::span<const Pixel> region);

/// True when any pixel of `region` is foreground in `mask`.
bool pixels_touch(const BinaryMask& mask, std::span<const Pixel> region);

}  // namespace crystal
