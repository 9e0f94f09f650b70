#include "crystalcount/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crystalcount/raster.hpp"

namespace crystal {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(Errc::InvalidParameter, message);
}

bool odd_positive(int k) { return k >= 1 && k % 2 == 1; }

}  // namespace

void ClassicalParams::validate() const {
  require(block >= 3 && block % 2 == 1, "block must be odd and >= 3");
  require(odd_positive(smooth_bright_k) && odd_positive(smooth_dark_k),
          "smoothing kernels must be odd and >= 1");
  require(odd_positive(close_bright_k) && odd_positive(close_dark_k),
          "closing kernels must be odd and >= 1");
  require(canny_low >= 0.0 && canny_low <= canny_high, "canny thresholds must satisfy 0 <= low <= high");
  require(tile >= 1, "tile must be >= 1");
  require(min_area_0or1_hole >= 0.0 && min_area_multi_hole >= 0.0, "minimum areas must be >= 0");
  require(solidity_max_0hole > 0.0 && solidity_max_0hole <= 1.0, "solidity_max_0hole must lie in (0, 1]");
}

TileClasses classify_tiles(const GrayImage& image, int tile) {
  TileClasses classes;
  classes.tile = tile;
  classes.columns = (image.width() + tile - 1) / tile;
  classes.rows = (image.height() + tile - 1) / tile;
  const auto count = static_cast<std::size_t>(classes.columns) * static_cast<std::size_t>(classes.rows);
  std::vector<std::uint64_t> sums(count, 0);
  std::vector<std::uint64_t> sizes(count, 0);
  std::uint64_t total = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const auto t = static_cast<std::size_t>(y / tile) * static_cast<std::size_t>(classes.columns) +
                     static_cast<std::size_t>(x / tile);
      sums[t] += image(x, y);
      ++sizes[t];
      total += image(x, y);
    }
  }
  classes.bright.resize(count);
  // tile_sum / tile_size >= total / n, cross-multiplied to stay exact.
  const std::uint64_t n = image.size();
  for (std::size_t t = 0; t < count; ++t) classes.bright[t] = sums[t] * n >= total * sizes[t] ? 1 : 0;
  return classes;
}

BinaryMask preprocess(const GrayImage& image, const ClassicalParams& params) {
  params.validate();
  if (image.width() < params.tile || image.height() < params.tile) {
    throw Error(Errc::ImageSmallerThanTile, "image " + std::to_string(image.width()) + "x" +
                                                std::to_string(image.height()) +
                                                " is smaller than the adaptation tile " +
                                                std::to_string(params.tile));
  }
  const TileClasses tiles = classify_tiles(image, params.tile);

  // Binarization row: dark boundaries against the local mean.
  const BinaryMask boundaries = adaptive_threshold(image, params.block, params.offset);

  // Crystal-mask row.
  const GrayImage smooth_bright = mean_filter(image, params.smooth_bright_k);
  const GrayImage smooth_dark = mean_filter(image, params.smooth_dark_k);
  GrayImage smoothed(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      smoothed(x, y) = tiles.is_bright(x, y) ? smooth_bright(x, y) : smooth_dark(x, y);
    }
  }
  const BinaryMask edges = canny_edges(smoothed, params.canny_low, params.canny_high);
  const BinaryMask closed_bright = morph(edges, MorphOp::Close, params.close_bright_k);
  const BinaryMask closed_dark = morph(edges, MorphOp::Close, params.close_dark_k);
  BinaryMask closed(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      closed(x, y) = tiles.is_bright(x, y) ? closed_bright(x, y) : closed_dark(x, y);
    }
  }
  const BinaryMask crystal_mask = flood_background(closed);

  BinaryMask out(image.width(), image.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = boundaries[i] != 0 && crystal_mask[i] != 0;
  return out;
}

bool keep_cluster(double area, int holes, double hull_area, const ClassicalParams& params) {
  if (holes >= 2) return area >= params.min_area_multi_hole;
  if (area < params.min_area_0or1_hole) return false;
  if (holes == 1) return true;
  // No opening: only an open contour (a crystal with a faint edge) is kept;
  // solid or line-like specks are dust.
  if (!(hull_area > 0.0)) return false;
  return area / hull_area <= params.solidity_max_0hole;
}

namespace {

struct Survivor {
  std::vector<Pixel> const* region;
  int holes;
};

std::vector<Survivor> surviving_clusters(const std::vector<std::vector<Pixel>>& regions,
                                         const ClassicalParams& params) {
  std::vector<Survivor> survivors;
  for (const auto& region : regions) {
    if (region.empty()) continue;
    const int holes = count_holes(region);
    const double area = static_cast<double>(region.size());
    // The hull only matters for opening-free clusters above the area gate.
    const double hull = holes == 0 && area >= params.min_area_0or1_hole ? convex_hull_area(region) : 0.0;
    if (keep_cluster(area, holes, hull, params)) survivors.push_back({&region, holes});
  }
  return survivors;
}

}  // namespace

LabelMap remove_small_clusters(const LabelMap& labels, const ClassicalParams& params) {
  params.validate();
  const auto regions = label_regions(labels);
  const auto survivors = surviving_clusters(regions, params);
  LabelMap out(labels.dims());
  // Regions are ordered by label and each is in raster order, so sorting the
  // survivors by first pixel reproduces raster-order numbering.
  std::vector<const std::vector<Pixel>*> ordered;
  ordered.reserve(survivors.size());
  for (const auto& s : survivors) ordered.push_back(s.region);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    const Pixel& pa = a->front();
    const Pixel& pb = b->front();
    return pa.y < pb.y || (pa.y == pb.y && pa.x < pb.x);
  });
  int next = 0;
  for (const auto* region : ordered) {
    ++next;
    for (const auto& p : *region) out(p.x, p.y) = next;
  }
  out.num_labels = next;
  return out;
}

std::vector<CrystalInstance> analyze_classical(const GrayImage& image, const ClassicalParams& params,
                                               const BinaryMask& exclusion) {
  if (!exclusion.empty() && exclusion.dims() != image.dims()) {
    throw Error(Errc::DimensionMismatch, "exclusion mask dimensions differ from the image");
  }
  BinaryMask mask = preprocess(image, params);
  if (!exclusion.empty()) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (exclusion[i] != 0) mask[i] = 0;
    }
  }
  const LabelMap clusters = remove_small_clusters(connected_components(mask, Connectivity::Eight), params);
  const auto regions = label_regions(clusters);

  std::vector<CrystalInstance> instances;
  int next = 0;
  for (const auto& region : regions) {
    if (bbox_touches(exclusion, region)) continue;
    instances.push_back(make_instance(++next, region, count_holes(region)));
  }
  return instances;
}

}  // namespace crystal
