#pragma once

// Slow reference implementations. Each one is written from the definition,
// sharing no code with the library.

#include <span>
#include <vector>

#include "crystalcount/image.hpp"
#include "crystalcount/starconvex.hpp"

namespace crystal::oracle {

/// Sort-based nearest-rank threshold, then per-pixel dimming.
GrayImage dim(const GrayImage& image, double quantile, double factor);

/// Per-pixel window mean with clamped coordinates, in floating point.
BinaryMask adaptive_threshold(const GrayImage& image, int block, int offset);
GrayImage mean_filter(const GrayImage& image, int k);

/// Textbook Canny using atan2 sectors and fixed-point hysteresis sweeps.
BinaryMask canny(const GrayImage& image, double low, double high);

/// Explicit k x k window; out-of-image pixels are background.
BinaryMask erode(const BinaryMask& mask, int k);
BinaryMask dilate(const BinaryMask& mask, int k);

/// Repeated sweeps until the reached set stops growing.
BinaryMask flood_background(const BinaryMask& edges);

/// Union-find labeling, labels numbered by first pixel in raster order.
LabelMap label(const BinaryMask& mask, bool eight);

/// Number of 4-connected background components inside the region's padded
/// bounding box that do not touch the padding.
int holes(std::span<const Pixel> region);

/// Even-odd point-in-polygon test (PNPOLY).
bool inside(std::span<const Point2> polygon, double x, double y);

/// Pixels whose centers lie inside the polygon, as a mask over dims.
BinaryMask raster(const StarPolygon& polygon, Dims dims);

double iou(const StarPolygon& a, const StarPolygon& b, Dims dims);

/// Literal greedy suppression over a pairwise IoU table.
std::vector<std::size_t> nms(std::span<const StarPolygon> sorted, double threshold, Dims dims);

}  // namespace crystal::oracle
