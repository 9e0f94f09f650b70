#include "crystalcount/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "crystalcount/geometry.hpp"

namespace crystal {

CameraProfile camera_profile(Camera camera, double um_per_px) {
  if (!(um_per_px > 0.0) || !std::isfinite(um_per_px)) {
    throw Error(Errc::InvalidParameter, "um_per_px must be positive");
  }
  if (camera == Camera::Old) return {Camera::Old, 1280, 1024, um_per_px};
  return {Camera::New, 2048, 1536, um_per_px};
}

GrayImage dim_bright_pixels(const GrayImage& image, double quantile, double factor) {
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw Error(Errc::InvalidParameter, "quantile must lie in (0, 1)");
  }
  if (!(factor >= 0.0 && factor < 1.0)) {
    throw Error(Errc::InvalidParameter, "factor must lie in [0, 1)");
  }
  std::array<std::size_t, 256> histogram{};
  for (auto v : image) ++histogram[v];

  // Threshold is the intensity at sorted position floor((1 - q) * n), i.e.
  // the smallest v with more than (1 - q) * n pixels at or below it.
  const double n = static_cast<double>(image.size());
  const auto rank = static_cast<std::size_t>(std::floor((1.0 - quantile) * n + 1e-9));
  std::size_t cumulative = 0;
  int threshold = 255;
  for (int v = 0; v < 256; ++v) {
    cumulative += histogram[static_cast<std::size_t>(v)];
    if (cumulative > rank) {
      threshold = v;
      break;
    }
  }

  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    lut[static_cast<std::size_t>(v)] =
        v >= threshold ? static_cast<std::uint8_t>(std::lround((1.0 - factor) * v))
                       : static_cast<std::uint8_t>(v);
  }
  GrayImage out = image;
  for (auto& v : out) v = lut[v];
  return out;
}

namespace {

// Sliding window sums along rows then columns with clamped indices.
template <typename Src>
Grid<std::int32_t, GrayTag> box_sum_replicate(const Src& src, int k) {
  const int w = src.width();
  const int h = src.height();
  const int r = k / 2;
  Grid<std::int32_t, GrayTag> horizontal(w, h);
  std::vector<std::int32_t> prefix(static_cast<std::size_t>(std::max(w, h) + 2 * r + 1));
  for (int y = 0; y < h; ++y) {
    prefix[0] = 0;
    for (int i = 0; i < w + 2 * r; ++i) {
      const int x = std::clamp(i - r, 0, w - 1);
      prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + src(x, y);
    }
    for (int x = 0; x < w; ++x) {
      horizontal(x, y) = prefix[static_cast<std::size_t>(x + k)] - prefix[static_cast<std::size_t>(x)];
    }
  }
  Grid<std::int32_t, GrayTag> out(w, h);
  for (int x = 0; x < w; ++x) {
    prefix[0] = 0;
    for (int i = 0; i < h + 2 * r; ++i) {
      const int y = std::clamp(i - r, 0, h - 1);
      prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + horizontal(x, y);
    }
    for (int y = 0; y < h; ++y) {
      out(x, y) = prefix[static_cast<std::size_t>(y + k)] - prefix[static_cast<std::size_t>(y)];
    }
  }
  return out;
}

void require_odd_kernel(int k, int minimum, Errc code, const char* what) {
  if (k < minimum || k % 2 == 0) {
    throw Error(code, std::string(what) + " must be odd and >= " + std::to_string(minimum) +
                          ", got " + std::to_string(k));
  }
}

}  // namespace

Grid<std::int32_t, GrayTag> box_sum(const GrayImage& image, int block) {
  require_odd_kernel(block, 1, Errc::InvalidKernel, "window size");
  return box_sum_replicate(image, block);
}

GrayImage mean_filter(const GrayImage& image, int k) {
  require_odd_kernel(k, 1, Errc::InvalidKernel, "smoothing kernel");
  if (k == 1) return image;
  const auto sums = box_sum_replicate(image, k);
  const std::int32_t area = k * k;
  GrayImage out(image.width(), image.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((sums[i] + area / 2) / area);
  }
  return out;
}

BinaryMask adaptive_threshold(const GrayImage& image, int block, int offset) {
  require_odd_kernel(block, 3, Errc::InvalidBlockSize, "adaptive threshold block");
  const auto sums = box_sum_replicate(image, block);
  const std::int64_t area = static_cast<std::int64_t>(block) * block;
  BinaryMask mask(image.width(), image.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    // v < sum / area - offset, kept in integers.
    mask[i] = static_cast<std::int64_t>(image[i]) * area < sums[i] - offset * area ? 1 : 0;
  }
  return mask;
}

BinaryMask canny_edges(const GrayImage& image, double low, double high) {
  if (std::isnan(low) || std::isnan(high) || low < 0.0 || low > high) {
    throw Error(Errc::InvalidThresholds, "canny thresholds must satisfy 0 <= low <= high");
  }
  const int w = image.width();
  const int h = image.height();
  BinaryMask edges(w, h);
  if (w < 3 || h < 3) return edges;

  auto at = [&](int x, int y) -> int {
    return image(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  Grid<std::int32_t, GrayTag> gx(w, h);
  Grid<std::int32_t, GrayTag> gy(w, h);
  Grid<std::int32_t, GrayTag> mag(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int dx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                     (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const int dy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                     (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      gx(x, y) = dx;
      gy(x, y) = dy;
      mag(x, y) = std::abs(dx) + std::abs(dy);
    }
  }

  // tan(22.5 deg) and tan(67.5 deg) in 15-bit fixed point.
  constexpr std::int64_t kTan22 = 13573;
  constexpr std::int64_t kTan67 = 79109;
  enum : std::uint8_t { kNone = 0, kWeak = 1, kStrong = 2 };
  Grid<std::uint8_t, MaskTag> klass(w, h);
  std::vector<Pixel> stack;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const int m = mag(x, y);
      if (static_cast<double>(m) <= low) continue;
      const std::int64_t ax = std::abs(gx(x, y));
      const std::int64_t ay = std::abs(gy(x, y)) << 15;
      int prev = 0;
      int next = 0;
      if (ay <= kTan22 * ax) {
        prev = mag(x - 1, y);
        next = mag(x + 1, y);
      } else if (ay >= kTan67 * ax) {
        prev = mag(x, y - 1);
        next = mag(x, y + 1);
      } else if ((gx(x, y) < 0) == (gy(x, y) < 0)) {
        prev = mag(x - 1, y - 1);
        next = mag(x + 1, y + 1);
      } else {
        prev = mag(x + 1, y - 1);
        next = mag(x - 1, y + 1);
      }
      if (!(m > prev && m >= next)) continue;
      if (static_cast<double>(m) > high) {
        klass(x, y) = kStrong;
        stack.push_back({x, y});
      } else {
        klass(x, y) = kWeak;
      }
    }
  }

  for (const auto& p : stack) edges(p.x, p.y) = 1;
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = p.x + dx;
        const int ny = p.y + dy;
        if (!edges.contains(nx, ny) || edges(nx, ny) != 0 || klass(nx, ny) != kWeak) continue;
        edges(nx, ny) = 1;
        stack.push_back({nx, ny});
      }
    }
  }
  return edges;
}

namespace {

// One separable pass of erosion/dilation along rows (vertical=false) or
// columns. Outside pixels are background.
BinaryMask morph_pass(const BinaryMask& src, int k, bool erode, bool vertical) {
  const int w = src.width();
  const int h = src.height();
  const int r = k / 2;
  const int lines = vertical ? w : h;
  const int length = vertical ? h : w;
  BinaryMask out(w, h);
  std::vector<int> prefix(static_cast<std::size_t>(length) + 1);
  for (int line = 0; line < lines; ++line) {
    prefix[0] = 0;
    for (int i = 0; i < length; ++i) {
      const int v = vertical ? src(line, i) : src(i, line);
      prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + (v != 0);
    }
    for (int i = 0; i < length; ++i) {
      const int lo = std::max(0, i - r);
      const int hi = std::min(length - 1, i + r);
      const int count = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
      const bool on = erode ? count == k : count > 0;
      if (vertical) {
        out(line, i) = on;
      } else {
        out(i, line) = on;
      }
    }
  }
  return out;
}

BinaryMask erode_or_dilate(const BinaryMask& mask, int k, bool erode) {
  return morph_pass(morph_pass(mask, k, erode, false), k, erode, true);
}

}  // namespace

BinaryMask morph(const BinaryMask& mask, MorphOp op, int k) {
  require_odd_kernel(k, 1, Errc::InvalidKernel, "morphology kernel");
  if (k == 1) return mask;
  switch (op) {
    case MorphOp::Erode: return erode_or_dilate(mask, k, true);
    case MorphOp::Dilate: return erode_or_dilate(mask, k, false);
    case MorphOp::Open: return erode_or_dilate(erode_or_dilate(mask, k, true), k, false);
    case MorphOp::Close: return erode_or_dilate(erode_or_dilate(mask, k, false), k, true);
  }
  return mask;
}

BinaryMask complement(const BinaryMask& mask) {
  BinaryMask out = mask;
  for (auto& v : out) v = v == 0 ? 1 : 0;
  return out;
}

BinaryMask flood_background(const BinaryMask& edges) {
  const int w = edges.width();
  const int h = edges.height();
  BinaryMask reached(w, h);
  std::vector<Pixel> stack;
  auto seed = [&](int x, int y) {
    if (edges(x, y) == 0 && reached(x, y) == 0) {
      reached(x, y) = 1;
      stack.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  constexpr std::array<Pixel, 4> kSteps = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    for (const auto& d : kSteps) {
      const int nx = p.x + d.x;
      const int ny = p.y + d.y;
      if (reached.contains(nx, ny)) seed(nx, ny);
    }
  }
  return complement(reached);
}

LabelMap connected_components(const BinaryMask& mask, Connectivity connectivity) {
  const int w = mask.width();
  const int h = mask.height();
  LabelMap labels(w, h);
  std::vector<Pixel> queue;
  const bool eight = connectivity == Connectivity::Eight;
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask(x, y) == 0 || labels(x, y) != 0) continue;
      ++next;
      labels(x, y) = next;
      queue.assign(1, Pixel{x, y});
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Pixel p = queue[head];
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (!mask.contains(nx, ny) || mask(nx, ny) == 0 || labels(nx, ny) != 0) continue;
            labels(nx, ny) = next;
            queue.push_back({nx, ny});
          }
        }
      }
    }
  }
  labels.num_labels = next;
  return labels;
}

std::vector<std::vector<Pixel>> label_regions(const LabelMap& labels) {
  std::vector<std::vector<Pixel>> regions(static_cast<std::size_t>(std::max(labels.num_labels, 0)));
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const int id = labels(x, y);
      if (id > 0 && id <= labels.num_labels) regions[static_cast<std::size_t>(id - 1)].push_back({x, y});
    }
  }
  return regions;
}

int count_holes(std::span<const Pixel> region) {
  if (region.empty()) return 0;
  const Box box = bounding_box(region);
  const int w = box.x1 - box.x0 + 3;
  const int h = box.y1 - box.y0 + 3;
  // 0 = background, 1 = region, 2 = background already visited.
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  auto cell = [&](int x, int y) -> std::uint8_t& {
    return cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };
  for (const auto& p : region) cell(p.x - box.x0 + 1, p.y - box.y0 + 1) = 1;

  std::vector<Pixel> stack;
  auto fill = [&](int sx, int sy) {
    cell(sx, sy) = 2;
    stack.assign(1, Pixel{sx, sy});
    while (!stack.empty()) {
      const Pixel p = stack.back();
      stack.pop_back();
      constexpr std::array<Pixel, 4> kSteps = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
      for (const auto& d : kSteps) {
        const int nx = p.x + d.x;
        const int ny = p.y + d.y;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h || cell(nx, ny) != 0) continue;
        cell(nx, ny) = 2;
        stack.push_back({nx, ny});
      }
    }
  };

  fill(0, 0);  // the padding ring is connected, so this reaches all of it
  int holes = 0;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      if (cell(x, y) == 0) {
        ++holes;
        fill(x, y);
      }
    }
  }
  return holes;
}

double convex_hull_area(std::span<const Pixel> region) {
  if (region.empty()) return 0.0;
  // Only the extreme pixels of each row can be hull vertices.
  const Box box = bounding_box(region);
  const auto rows = static_cast<std::size_t>(box.y1 - box.y0 + 1);
  std::vector<int> lo(rows, std::numeric_limits<int>::max());
  std::vector<int> hi(rows, std::numeric_limits<int>::min());
  for (const auto& p : region) {
    const auto r = static_cast<std::size_t>(p.y - box.y0);
    lo[r] = std::min(lo[r], p.x);
    hi[r] = std::max(hi[r], p.x);
  }
  std::vector<Point2> points;
  points.reserve(2 * rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (lo[r] > hi[r]) continue;
    const double y = box.y0 + static_cast<double>(r);
    points.push_back({static_cast<double>(lo[r]), y});
    if (hi[r] != lo[r]) points.push_back({static_cast<double>(hi[r]), y});
  }
  return polygon_area(convex_hull(points));
}

}  // namespace crystal
