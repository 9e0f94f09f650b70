#pragma once

#include <vector>

#include "crystalcount/image.hpp"
#include "crystalcount/instance.hpp"

namespace crystal {

/// Tunables of the morphological pipeline. Kernel and window sizes are odd.
struct ClassicalParams {
  int block = 31;
  int offset = 5;
  double canny_low = 50.0;
  double canny_high = 80.0;
  int smooth_bright_k = 3;
  int smooth_dark_k = 5;
  int close_bright_k = 3;
  int close_dark_k = 5;
  int tile = 64;
  double min_area_0or1_hole = 20.0;
  double min_area_multi_hole = 5.0;
  double solidity_max_0hole = 0.6;

  /// Throws Error(InvalidParameter) describing the first bad field.
  void validate() const;
};

/// Per-tile brightness class: true where the tile mean is at least the
/// global mean. Indexed by tile row-major.
struct TileClasses {
  int tile = 0;
  int columns = 0;
  int rows = 0;
  std::vector<std::uint8_t> bright;

  bool is_bright(int x, int y) const noexcept {
    return bright[static_cast<std::size_t>(y / tile) * static_cast<std::size_t>(columns) +
                  static_cast<std::size_t>(x / tile)] != 0;
  }
};

TileClasses classify_tiles(const GrayImage& image, int tile);

/// Boundary mask of crystal clusters: the adaptive-threshold binarization
/// restricted to the crystal mask (tile-adaptive smoothing, Canny,
/// tile-adaptive closing, background flood).
BinaryMask preprocess(const GrayImage& image, const ClassicalParams& params);

/// The size / opening / convex-hull gate for one cluster.
bool keep_cluster(double area, int holes, double hull_area, const ClassicalParams& params);

/// Drops clusters failing `keep_cluster` and relabels survivors 1..n in
/// raster order of their first pixel.
LabelMap remove_small_clusters(const LabelMap& labels, const ClassicalParams& params);

/// Full classical analysis. `exclusion` may be default-constructed (no
/// exclusion) or must match the image dimensions.
std::vector<CrystalInstance> analyze_classical(const GrayImage& image, const ClassicalParams& params,
                                               const BinaryMask& exclusion = {});

}  // namespace crystal
