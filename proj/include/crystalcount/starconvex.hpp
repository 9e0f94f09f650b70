#pragma once

#include <span>
#include <vector>

#include "crystalcount/geometry.hpp"
#include "crystalcount/image.hpp"
#include "crystalcount/instance.hpp"

namespace crystal {

inline constexpr int kDefaultRays = 32;

/// Dense star-convex prediction: object probability per pixel plus the
/// distance to the object boundary along `rays` equally spaced directions.
/// The ray index varies fastest in `dist`.
class RadialMap {
 public:
  RadialMap() = default;
  RadialMap(int width, int height, int rays = kDefaultRays);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int rays() const noexcept { return rays_; }
  Dims dims() const noexcept { return {width_, height_}; }

  float& prob(int x, int y) noexcept { return prob_[pixel_index(x, y)]; }
  float prob(int x, int y) const noexcept { return prob_[pixel_index(x, y)]; }
  float& dist(int x, int y, int ray) noexcept { return dist_[pixel_index(x, y) * rays_ + ray]; }
  float dist(int x, int y, int ray) const noexcept { return dist_[pixel_index(x, y) * rays_ + ray]; }
  std::span<const float> dists(int x, int y) const noexcept {
    return std::span<const float>(dist_).subspan(pixel_index(x, y) * rays_, static_cast<std::size_t>(rays_));
  }

  std::span<float> prob_values() noexcept { return prob_; }
  std::span<const float> prob_values() const noexcept { return prob_; }
  std::span<float> dist_values() noexcept { return dist_; }
  std::span<const float> dist_values() const noexcept { return dist_; }

  /// Checks value ranges: prob in [0, 1], dist in [0, max(width, height)].
  void validate() const;

  /// Bitwise comparison, so NaN payloads and signed zeros count.
  friend bool operator==(const RadialMap& a, const RadialMap& b);

 private:
  std::size_t pixel_index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::size_t rays_ = 0;
  std::vector<float> prob_;
  std::vector<float> dist_;
};

/// Polygon with vertex k at center + radii[k] * (cos t_k, sin t_k),
/// t_k = 2 pi k / radii.size(). Coordinates are continuous: pixel (x, y)
/// covers [x, x+1) x [y, y+1).
struct StarPolygon {
  Point2 center;
  std::vector<double> radii;
  double score = 0.0;

  std::vector<Point2> vertices() const;
};

struct StarParams {
  double prob_threshold = 0.5;
  double nms_iou = 0.4;
  int grid_step = 1;

  void validate() const;
};

/// Pixel cover of a polygon: half-open spans [x0, x1) per row, ordered by row
/// then x. A pixel is covered when its center lies inside (even-odd rule).
struct PolygonRaster {
  struct Span {
    int y = 0;
    int x0 = 0;
    int x1 = 0;
  };
  std::vector<Span> spans;
  std::size_t pixel_count = 0;
  Box box;
};

PolygonRaster rasterize(const StarPolygon& polygon, Dims dims);

std::size_t intersection_count(const PolygonRaster& a, const PolygonRaster& b);

/// Candidate polygons above the probability threshold, best score first and
/// raster order among equal scores. Pixels with a zero radius are skipped.
std::vector<StarPolygon> candidates(const RadialMap& map, const StarParams& params);

/// Rasterized intersection over union; 0 when the union is empty.
double polygon_iou(const StarPolygon& a, const StarPolygon& b, Dims dims);

/// Greedy suppression over candidates already sorted best-first; survivors
/// are returned in acceptance order.
std::vector<StarPolygon> nms(std::span<const StarPolygon> sorted, const StarParams& params, Dims dims);

/// Paints survivors in order, earlier polygons keeping contested pixels.
/// Polygons that end up with no pixel get no label, so labels stay dense.
LabelMap rasterize_instances(std::span<const StarPolygon> polygons, Dims dims);

/// The map an ideal predictor would output for `labels`. Each ray walks unit
/// steps from the pixel center while the sampled pixel keeps the own label;
/// after s >= 1 inside steps dist is s + 0.5, otherwise 0. prob is the
/// distance to the nearest other pixel normalised by its per-instance maximum.
RadialMap encode_ground_truth(const LabelMap& labels, int rays = kDefaultRays);

std::vector<CrystalInstance> analyze_star(const RadialMap& map, const StarParams& params,
                                          const BinaryMask& exclusion = {});

/// Source of radial maps for the deep path. The network itself lives outside
/// this library; providers hand over its output or a synthetic equivalent.
class MapProvider {
 public:
  virtual ~MapProvider() = default;
  /// `dimmed` is the input after bright-pixel dimming.
  virtual RadialMap radial_map(const GrayImage& dimmed) const = 0;
};

/// Serves a precomputed map, e.g. decoded from an RDM payload.
class StoredMapProvider final : public MapProvider {
 public:
  explicit StoredMapProvider(RadialMap map) : map_(std::move(map)) {}
  RadialMap radial_map(const GrayImage& dimmed) const override;

 private:
  RadialMap map_;
};

/// Encodes a known label raster; used to exercise the decoder without weights.
class GroundTruthProvider final : public MapProvider {
 public:
  explicit GroundTruthProvider(LabelMap labels, int rays = kDefaultRays)
      : labels_(std::move(labels)), rays_(rays) {}
  RadialMap radial_map(const GrayImage& dimmed) const override;

 private:
  LabelMap labels_;
  int rays_;
};

}  // namespace crystal
