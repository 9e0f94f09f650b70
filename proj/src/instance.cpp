#include "crystalcount/instance.hpp"

#include <algorithm>

#include "crystalcount/geometry.hpp"

namespace crystal {

CrystalInstance make_instance(int id, std::span<const Pixel> region, int hole_count) {
  CrystalInstance instance;
  instance.id = id;
  instance.area_px = static_cast<double>(region.size());
  instance.hole_count = hole_count;
  instance.crystal_count = hole_count > 1 ? hole_count : 1;
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : region) {
    sx += p.x;
    sy += p.y;
  }
  if (!region.empty()) {
    instance.centroid = {sx / static_cast<double>(region.size()), sy / static_cast<double>(region.size())};
  }
  instance.boundary = to_points(trace_outer_contour(region));
  return instance;
}

bool bbox_touches(const BinaryMask& mask, std::span<const Pixel> region) {
  if (mask.empty() || region.empty()) return false;
  const Box box = bounding_box(region);
  for (int y = std::max(box.y0, 0); y <= std::min(box.y1, mask.height() - 1); ++y) {
    for (int x = std::max(box.x0, 0); x <= std::min(box.x1, mask.width() - 1); ++x) {
      if (mask(x, y) != 0) return true;
    }
  }
  return false;
}

bool pixels_touch(const BinaryMask& mask, std::span<const Pixel> region) {
  if (mask.empty()) return false;
  for (const auto& p : region) {
    if (mask.contains(p.x, p.y) && mask(p.x, p.y) != 0) return true;
  }
  return false;
}

}  // namespace crystal
