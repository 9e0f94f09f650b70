#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crystalcount/error.hpp"

namespace crystal {

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Dims {
  int width = 0;
  int height = 0;
  std::size_t area() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Row-major raster. The tag keeps rasters of equal storage type but different
/// meaning (intensity vs. mask) from converting into each other silently.
template <typename T, typename Tag>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(Errc::InvalidParameter,
                  "raster dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
    values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Grid(Dims dims, T fill = T{}) : Grid(dims.width, dims.height, fill) {}

  Grid(int width, int height, std::vector<T> values) : Grid(width, height) {
    if (values.size() != values_.size()) {
      throw Error(Errc::DimensionMismatch, "pixel buffer length does not match width*height");
    }
    values_ = std::move(values);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Dims dims() const noexcept { return {width_, height_}; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  T& operator()(int x, int y) noexcept { return values_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return values_[index(x, y)]; }
  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  std::span<T> row(int y) noexcept {
    return std::span<T>(values_).subspan(index(0, y), static_cast<std::size_t>(width_));
  }
  std::span<const T> row(int y) const noexcept {
    return std::span<const T>(values_).subspan(index(0, y), static_cast<std::size_t>(width_));
  }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

struct GrayTag;
struct MaskTag;
struct LabelTag;
struct RgbTag;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit single-channel intensity image.
using GrayImage = Grid<std::uint8_t, GrayTag>;
/// Values are 0 (background) or 1 (foreground).
using BinaryMask = Grid<std::uint8_t, MaskTag>;
using RgbImage = Grid<Rgb, RgbTag>;

/// Instance raster: 0 is background, instances are 1..num_labels.
class LabelMap : public Grid<std::int32_t, LabelTag> {
 public:
  LabelMap() = default;
  LabelMap(int width, int height) : Grid(width, height, 0) {}
  explicit LabelMap(Dims dims) : Grid(dims, 0) {}

  int num_labels = 0;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

inline std::size_t count_foreground(const BinaryMask& mask) {
  std::size_t n = 0;
  for (auto v : mask) n += v != 0;
  return n;
}

enum class Camera { Old, New };

/// Sensor geometry plus the px->um calibration the operator configures.
struct CameraProfile {
  Camera name = Camera::Old;
  int width = 0;
  int height = 0;
  double um_per_px = 1.0;
};

CameraProfile camera_profile(Camera camera, double um_per_px);

}  // namespace crystal
