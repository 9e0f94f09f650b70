#pragma once

#include <span>
#include <vector>

#include "crystalcount/image.hpp"

namespace crystal {

enum class Connectivity { Four, Eight };

enum class MorphOp { Erode, Dilate, Open, Close };

/// Dims every pixel at or above the nearest-rank (1 - quantile) quantile of
/// the intensity histogram to round((1 - factor) * v).
GrayImage dim_bright_pixels(const GrayImage& image, double quantile = 0.20, double factor = 0.20);

/// Sum over the block x block window, borders replicated.
Grid<std::int32_t, GrayTag> box_sum(const GrayImage& image, int block);

/// Rounded mean over the k x k window, borders replicated.
GrayImage mean_filter(const GrayImage& image, int k);

/// Foreground where the pixel is darker than its local window mean minus
/// offset. Evaluated in integers, so any constant intensity shift that does
/// not clip leaves the mask unchanged.
BinaryMask adaptive_threshold(const GrayImage& image, int block, int offset);

/// Canny detector: 3x3 Sobel, L1 magnitude, 4-direction non-maximum
/// suppression, and 8-connected hysteresis. Strong edges have magnitude above
/// `high`, weak ones above `low`. The 1-px image border never carries edges.
BinaryMask canny_edges(const GrayImage& image, double low, double high);

/// Square k x k structuring element; out-of-image pixels count as background.
BinaryMask morph(const BinaryMask& mask, MorphOp op, int k);

BinaryMask complement(const BinaryMask& mask);

/// 4-connected flood from every border pixel that is not an edge. Returns the
/// pixels the flood could not reach: the edges plus every enclosed interior.
BinaryMask flood_background(const BinaryMask& edges);

/// Labels are assigned in raster order of each component's first pixel.
LabelMap connected_components(const BinaryMask& mask, Connectivity connectivity);

/// Pixel lists of each label; element i holds label i + 1 in raster order.
std::vector<std::vector<Pixel>> label_regions(const LabelMap& labels);

/// Openings enclosed by an 8-connected region: 4-connected background
/// components of the padded bounding box that do not touch the padding.
int count_holes(std::span<const Pixel> region);

/// Convex hull area of the pixel coordinates (0 for degenerate regions).
double convex_hull_area(std::span<const Pixel> region);

}  // namespace crystal
