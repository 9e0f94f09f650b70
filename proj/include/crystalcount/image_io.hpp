#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "crystalcount/image.hpp"

namespace crystal {

using Bytes = std::vector<std::uint8_t>;

/// 16-bit single-channel raster, used for label interchange.
using Gray16Image = Grid<std::uint16_t, struct Gray16Tag>;

/// Decodes PNG (gray, gray+alpha, RGB, RGBA, palette; 8 or 16 bit) or BMP
/// (8-bit palette, 24-bit, 32-bit, uncompressed) and converts color to
/// grayscale with integer BT.601 luma.
GrayImage decode_image(std::span<const std::uint8_t> bytes);
GrayImage load_image(const std::filesystem::path& path);

/// Reads a single-channel PNG at full precision (8-bit samples are widened).
Gray16Image decode_png16(std::span<const std::uint8_t> bytes);
Gray16Image load_png16(const std::filesystem::path& path);

Bytes encode_png(const GrayImage& image);
Bytes encode_png(const RgbImage& image);
Bytes encode_png(const Gray16Image& image);
Bytes encode_bmp(const RgbImage& image);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// round(0.299 R + 0.587 G + 0.114 B) in exact integer arithmetic.
constexpr std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

}  // namespace crystal
