#include "crystalcount/starconvex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "crystalcount/raster.hpp"

namespace crystal {

RadialMap::RadialMap(int width, int height, int rays)
    : width_(width), height_(height), rays_(static_cast<std::size_t>(rays)) {
  if (width < 1 || height < 1 || rays < 1) {
    throw Error(Errc::InvalidParameter, "radial map dimensions must be positive");
  }
  const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  prob_.assign(pixels, 0.0f);
  dist_.assign(pixels * rays_, 0.0f);
}

void RadialMap::validate() const {
  for (float p : prob_) {
    if (!(p >= 0.0f && p <= 1.0f)) throw Error(Errc::InvalidParameter, "probability outside [0, 1]");
  }
  const auto limit = static_cast<float>(std::max(width_, height_));
  for (float d : dist_) {
    if (!(d >= 0.0f && d <= limit)) throw Error(Errc::InvalidParameter, "ray distance outside [0, max(w, h)]");
  }
}

bool operator==(const RadialMap& a, const RadialMap& b) {
  auto same_bits = [](const std::vector<float>& x, const std::vector<float>& y) {
    return x.size() == y.size() &&
           (x.empty() || std::memcmp(x.data(), y.data(), x.size() * sizeof(float)) == 0);
  };
  return a.width_ == b.width_ && a.height_ == b.height_ && a.rays_ == b.rays_ && same_bits(a.prob_, b.prob_) &&
         same_bits(a.dist_, b.dist_);
}

std::vector<Point2> StarPolygon::vertices() const {
  const std::size_t n = radii.size();
  std::vector<Point2> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    out[k] = {center.x + radii[k] * std::cos(theta), center.y + radii[k] * std::sin(theta)};
  }
  return out;
}

void StarParams::validate() const {
  if (!(prob_threshold > 0.0 && prob_threshold < 1.0)) {
    throw Error(Errc::InvalidParameter, "prob_threshold must lie in (0, 1)");
  }
  if (!(nms_iou > 0.0 && nms_iou < 1.0)) throw Error(Errc::InvalidParameter, "nms_iou must lie in (0, 1)");
  if (grid_step < 1) throw Error(Errc::InvalidParameter, "grid_step must be >= 1");
}

PolygonRaster rasterize(const StarPolygon& polygon, Dims dims) {
  PolygonRaster raster;
  const auto v = polygon.vertices();
  if (v.size() < 3) return raster;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& p : v) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  if (!std::isfinite(ymin) || !std::isfinite(ymax)) return raster;
  const double height = static_cast<double>(dims.height);
  const int row0 = static_cast<int>(std::clamp(std::floor(ymin - 0.5), 0.0, height));
  const int row1 = static_cast<int>(std::clamp(std::ceil(ymax - 0.5), -1.0, height - 1.0));
  std::vector<double> crossings;
  for (int y = row0; y <= row1; ++y) {
    const double py = y + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      if ((v[i].y > py) != (v[j].y > py)) {
        crossings.push_back((v[j].x - v[i].x) * (py - v[i].y) / (v[j].y - v[i].y) + v[i].x);
      }
    }
    std::sort(crossings.begin(), crossings.end());
    // Even-odd: a center px is inside iff crossings[2m] <= px < crossings[2m+1].
    for (std::size_t m = 0; m + 1 < crossings.size(); m += 2) {
      const double lo = crossings[m];
      const double hi = crossings[m + 1];
      int x = static_cast<int>(std::clamp(std::floor(lo - 0.5) - 1.0, 0.0, static_cast<double>(dims.width)));
      while (x < dims.width && x + 0.5 < lo) ++x;
      const int start = x;
      while (x < dims.width && x + 0.5 < hi) ++x;
      if (x > start) {
        raster.spans.push_back({y, start, x});
        raster.pixel_count += static_cast<std::size_t>(x - start);
        if (raster.box.empty()) {
          raster.box = {start, y, x - 1, y};
        } else {
          raster.box.x0 = std::min(raster.box.x0, start);
          raster.box.x1 = std::max(raster.box.x1, x - 1);
          raster.box.y1 = y;
        }
      }
    }
  }
  return raster;
}

std::size_t intersection_count(const PolygonRaster& a, const PolygonRaster& b) {
  if (!a.box.intersects(b.box)) return 0;
  std::size_t total = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.spans.size() && j < b.spans.size()) {
    const auto& sa = a.spans[i];
    const auto& sb = b.spans[j];
    if (sa.y != sb.y) {
      (sa.y < sb.y ? i : j)++;
      continue;
    }
    const int lo = std::max(sa.x0, sb.x0);
    const int hi = std::min(sa.x1, sb.x1);
    if (hi > lo) total += static_cast<std::size_t>(hi - lo);
    (sa.x1 < sb.x1 ? i : j)++;
  }
  return total;
}

namespace {

double iou_of(const PolygonRaster& a, const PolygonRaster& b) {
  const std::size_t inter = intersection_count(a, b);
  const std::size_t uni = a.pixel_count + b.pixel_count - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::vector<StarPolygon> candidates(const RadialMap& map, const StarParams& params) {
  params.validate();
  std::vector<StarPolygon> out;
  for (int y = 0; y < map.height(); y += params.grid_step) {
    for (int x = 0; x < map.width(); x += params.grid_step) {
      const float p = map.prob(x, y);
      if (!(p >= params.prob_threshold)) continue;
      const auto d = map.dists(x, y);
      if (std::any_of(d.begin(), d.end(), [](float r) { return !(r > 0.0f); })) continue;
      out.push_back({{x + 0.5, y + 0.5}, std::vector<double>(d.begin(), d.end()), static_cast<double>(p)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const StarPolygon& a, const StarPolygon& b) { return a.score > b.score; });
  return out;
}

double polygon_iou(const StarPolygon& a, const StarPolygon& b, Dims dims) {
  return iou_of(rasterize(a, dims), rasterize(b, dims));
}

std::vector<StarPolygon> nms(std::span<const StarPolygon> sorted, const StarParams& params, Dims dims) {
  params.validate();
  std::vector<StarPolygon> accepted;
  std::vector<PolygonRaster> accepted_rasters;
  for (const auto& candidate : sorted) {
    PolygonRaster raster = rasterize(candidate, dims);
    bool suppressed = false;
    for (const auto& kept : accepted_rasters) {
      // Disjoint boxes give IoU 0, which never reaches a positive threshold.
      if (!kept.box.intersects(raster.box)) continue;
      if (iou_of(kept, raster) >= params.nms_iou) {
        suppressed = true;
        break;
      }
    }
    if (suppressed) continue;
    accepted.push_back(candidate);
    accepted_rasters.push_back(std::move(raster));
  }
  return accepted;
}

LabelMap rasterize_instances(std::span<const StarPolygon> polygons, Dims dims) {
  LabelMap labels(dims);
  int next = 0;
  for (const auto& polygon : polygons) {
    const int id = next + 1;
    std::size_t painted = 0;
    for (const auto& span : rasterize(polygon, dims).spans) {
      for (int x = span.x0; x < span.x1; ++x) {
        auto& cell = labels(x, span.y);
        if (cell == 0) {
          cell = id;
          ++painted;
        }
      }
    }
    if (painted > 0) next = id;
  }
  labels.num_labels = next;
  return labels;
}

RadialMap encode_ground_truth(const LabelMap& labels, int rays) {
  RadialMap map(labels.width(), labels.height(), rays);
  std::vector<double> cosines(static_cast<std::size_t>(rays));
  std::vector<double> sines(static_cast<std::size_t>(rays));
  for (int k = 0; k < rays; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / rays;
    cosines[static_cast<std::size_t>(k)] = std::cos(theta);
    sines[static_cast<std::size_t>(k)] = std::sin(theta);
  }
  const int max_steps = std::max(labels.width(), labels.height());

  // Regions are gathered by value so arbitrary positive ids work, not only
  // dense ones.
  std::vector<std::vector<Pixel>> regions;
  std::vector<int> slot;
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const int id = labels(x, y);
      if (id <= 0) continue;
      if (static_cast<std::size_t>(id) >= slot.size()) slot.resize(static_cast<std::size_t>(id) + 1, -1);
      auto& s = slot[static_cast<std::size_t>(id)];
      if (s < 0) {
        s = static_cast<int>(regions.size());
        regions.emplace_back();
      }
      regions[static_cast<std::size_t>(s)].push_back({x, y});
    }
  }

  auto label_at = [&](int x, int y) { return labels.contains(x, y) ? labels(x, y) : 0; };
  std::vector<Pixel> outside;
  std::vector<double> nearest;
  for (const auto& region : regions) {
    const int id = labels(region.front().x, region.front().y);
    // The nearest foreign pixel of any member is 4-adjacent to the region;
    // positions beyond the raster border count as foreign.
    outside.clear();
    for (const auto& p : region) {
      constexpr Pixel kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& d : kSteps) {
        if (label_at(p.x + d.x, p.y + d.y) != id) outside.push_back({p.x + d.x, p.y + d.y});
      }
    }
    nearest.assign(region.size(), 0.0);
    double peak = 0.0;
    for (std::size_t i = 0; i < region.size(); ++i) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& q : outside) {
        const std::int64_t dx = region[i].x - q.x;
        const std::int64_t dy = region[i].y - q.y;
        best = std::min(best, dx * dx + dy * dy);
      }
      nearest[i] = std::sqrt(static_cast<double>(best));
      peak = std::max(peak, nearest[i]);
    }
    for (std::size_t i = 0; i < region.size(); ++i) {
      const Pixel p = region[i];
      map.prob(p.x, p.y) = static_cast<float>(nearest[i] / peak);
      for (int k = 0; k < rays; ++k) {
        int steps = 0;
        for (int s = 1; s <= max_steps; ++s) {
          const double sx = p.x + 0.5 + s * cosines[static_cast<std::size_t>(k)];
          const double sy = p.y + 0.5 + s * sines[static_cast<std::size_t>(k)];
          if (label_at(static_cast<int>(std::floor(sx)), static_cast<int>(std::floor(sy))) != id) break;
          steps = s;
        }
        // The boundary crossing lies between the last inside sample and the
        // first outside one; report the midpoint. Rays with no inside sample
        // stay 0 so boundary-touching pixels emit no candidate.
        map.dist(p.x, p.y, k) = steps > 0 ? static_cast<float>(steps) + 0.5f : 0.0f;
      }
    }
  }
  return map;
}

std::vector<CrystalInstance> analyze_star(const RadialMap& map, const StarParams& params,
                                          const BinaryMask& exclusion) {
  if (!exclusion.empty() && exclusion.dims() != map.dims()) {
    throw Error(Errc::DimensionMismatch, "exclusion mask dimensions differ from the radial map");
  }
  const auto survivors = nms(candidates(map, params), params, map.dims());
  const LabelMap labels = rasterize_instances(survivors, map.dims());
  std::vector<CrystalInstance> instances;
  int next = 0;
  for (const auto& region : label_regions(labels)) {
    if (region.empty() || pixels_touch(exclusion, region)) continue;
    instances.push_back(make_instance(++next, region, 0));
  }
  return instances;
}

RadialMap StoredMapProvider::radial_map(const GrayImage&) const { return map_; }

RadialMap GroundTruthProvider::radial_map(const GrayImage&) const {
  return encode_ground_truth(labels_, rays_);
}

}  // namespace crystal
