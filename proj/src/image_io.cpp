#include "crystalcount/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

namespace crystal {
namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= kPngSignature.size() &&
         std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin());
}

bool is_bmp(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M';
}

// ---------------------------------------------------------------------------
// PNG via libpng. State lives on the heap so nothing automatic is modified
// between setjmp and a potential longjmp.

struct PngDecoded {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 or 3 after transforms
  int bit_depth = 0;  // 8 or 16
  std::vector<std::uint8_t> samples;
  std::string error;
};

struct PngSource {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->bytes.size() - src->pos < n) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->bytes.data() + src->pos, n);
  src->pos += n;
}

void png_error_sink(png_structp png, png_const_charp message) {
  auto* decoded = static_cast<PngDecoded*>(png_get_error_ptr(png));
  if (decoded != nullptr) decoded->error = message;
  png_longjmp(png, 1);
}

void png_warning_sink(png_structp, png_const_charp) {}

enum class PngMode { Gray8OrRgb8, Gray16 };

std::unique_ptr<PngDecoded> decode_png_raw(std::span<const std::uint8_t> bytes, PngMode mode) {
  auto decoded = std::make_unique<PngDecoded>();
  auto source = std::make_unique<PngSource>(PngSource{bytes, 0});
  auto rows = std::make_unique<std::vector<png_bytep>>();

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, decoded.get(),
                                           png_error_sink, png_warning_sink);
  if (png == nullptr) throw Error(Errc::CorruptImage, "cannot allocate PNG decoder");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(Errc::CorruptImage, "cannot allocate PNG decoder");
  }

  volatile bool unsupported = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(Errc::CorruptImage, "corrupt PNG: " + decoded->error);
  }

  png_set_read_fn(png, source.get(), png_read_from_span);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (mode == PngMode::Gray16 && (color_type & PNG_COLOR_MASK_COLOR) != 0) {
    unsupported = true;
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(png);
    if (bit_depth == 16) {
      if (mode == PngMode::Gray16) {
        png_set_swap(png);
      } else {
        png_set_strip_16(png);
      }
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    decoded->width = static_cast<int>(width);
    decoded->height = static_cast<int>(height);
    decoded->channels = png_get_channels(png, info);
    decoded->bit_depth = png_get_bit_depth(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    decoded->samples.resize(stride * height);
    rows->resize(height);
    for (png_uint_32 y = 0; y < height; ++y) (*rows)[y] = decoded->samples.data() + y * stride;
    png_read_image(png, rows->data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (unsupported) throw Error(Errc::UnsupportedFormat, "expected a single-channel PNG");
  if (decoded->width < 1 || decoded->height < 1) throw Error(Errc::CorruptImage, "empty PNG");
  return decoded;
}

GrayImage gray_from_png(std::span<const std::uint8_t> bytes) {
  const auto png = decode_png_raw(bytes, PngMode::Gray8OrRgb8);
  GrayImage image(png->width, png->height);
  const std::size_t n = image.size();
  if (png->channels == 1) {
    std::copy_n(png->samples.begin(), n, image.begin());
  } else if (png->channels == 3) {
    for (std::size_t i = 0; i < n; ++i) {
      image[i] = luma(png->samples[3 * i], png->samples[3 * i + 1], png->samples[3 * i + 2]);
    }
  } else {
    throw Error(Errc::UnsupportedFormat, "unexpected PNG channel layout");
  }
  return image;
}

struct PngSink {
  Bytes out;
};

void png_write_to_vector(png_structp png, png_bytep data, png_size_t n) {
  auto* sink = static_cast<PngSink*>(png_get_io_ptr(png));
  sink->out.insert(sink->out.end(), data, data + n);
}

void png_flush_noop(png_structp) {}

Bytes encode_png_raw(int width, int height, int color_type, int bit_depth,
                     std::span<const std::uint8_t> samples, std::size_t stride) {
  auto sink = std::make_unique<PngSink>();
  auto error = std::make_unique<PngDecoded>();
  auto rows = std::make_unique<std::vector<png_bytep>>(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    (*rows)[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(samples.data() + static_cast<std::size_t>(y) * stride);
  }

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, error.get(), png_error_sink, png_warning_sink);
  if (png == nullptr) throw Error(Errc::Io, "cannot allocate PNG encoder");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(Errc::Io, "cannot allocate PNG encoder");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(Errc::Io, "PNG encoding failed: " + error->error);
  }
  png_set_write_fn(png, sink.get(), png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(sink->out);
}

// ---------------------------------------------------------------------------
// BMP (Windows bitmap, BITMAPINFOHEADER or later, uncompressed).

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

GrayImage gray_from_bmp(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 54) throw Error(Errc::CorruptImage, "corrupt BMP: header truncated");
  const std::uint32_t pixel_offset = le32(bytes, 10);
  const std::uint32_t dib_size = le32(bytes, 14);
  if (dib_size < 40) throw Error(Errc::UnsupportedFormat, "unsupported BMP header variant");
  const auto width = static_cast<std::int32_t>(le32(bytes, 18));
  const auto raw_height = static_cast<std::int32_t>(le32(bytes, 22));
  const std::uint16_t bpp = le16(bytes, 28);
  const std::uint32_t compression = le32(bytes, 30);
  std::uint32_t colors_used = le32(bytes, 46);

  if (compression != 0 && !(compression == 3 && bpp == 32)) {
    throw Error(Errc::UnsupportedFormat, "compressed BMP is not supported");
  }
  if (bpp != 8 && bpp != 24 && bpp != 32) {
    throw Error(Errc::UnsupportedFormat, "BMP bit depth " + std::to_string(bpp) + " not supported");
  }
  if (width < 1 || raw_height == 0 || raw_height == INT32_MIN || width > (1 << 16) ||
      std::abs(raw_height) > (1 << 16)) {
    throw Error(Errc::CorruptImage, "corrupt BMP: bad dimensions");
  }
  const bool top_down = raw_height < 0;
  const int height = std::abs(raw_height);
  const std::size_t stride = ((static_cast<std::size_t>(bpp) * width + 31) / 32) * 4;
  if (pixel_offset > bytes.size() || bytes.size() - pixel_offset < stride * height) {
    throw Error(Errc::CorruptImage, "corrupt BMP: pixel data truncated");
  }

  std::array<std::uint8_t, 256> palette_gray{};
  if (bpp == 8) {
    if (colors_used == 0 || colors_used > 256) colors_used = 256;
    const std::size_t palette_at = 14 + dib_size;
    if (palette_at + 4 * colors_used > pixel_offset) {
      throw Error(Errc::CorruptImage, "corrupt BMP: palette truncated");
    }
    for (std::uint32_t i = 0; i < colors_used; ++i) {
      const std::size_t at = palette_at + 4 * i;
      palette_gray[i] = luma(bytes[at + 2], bytes[at + 1], bytes[at]);
    }
  }

  GrayImage image(width, height);
  const std::size_t step = bpp / 8;
  for (int y = 0; y < height; ++y) {
    const int src_row = top_down ? y : height - 1 - y;
    const std::size_t row_at = pixel_offset + static_cast<std::size_t>(src_row) * stride;
    for (int x = 0; x < width; ++x) {
      const std::size_t at = row_at + static_cast<std::size_t>(x) * step;
      image(x, y) = bpp == 8 ? palette_gray[bytes[at]] : luma(bytes[at + 2], bytes[at + 1], bytes[at]);
    }
  }
  return image;
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  if (is_png(bytes)) return gray_from_png(bytes);
  if (is_bmp(bytes)) return gray_from_bmp(bytes);
  throw Error(Errc::UnsupportedFormat, "unrecognized image format (PNG and BMP are supported)");
}

GrayImage load_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

Gray16Image decode_png16(std::span<const std::uint8_t> bytes) {
  if (!is_png(bytes)) throw Error(Errc::UnsupportedFormat, "expected a PNG file");
  const auto png = decode_png_raw(bytes, PngMode::Gray16);
  Gray16Image image(png->width, png->height);
  if (png->bit_depth == 16) {
    for (std::size_t i = 0; i < image.size(); ++i) {
      image[i] = static_cast<std::uint16_t>(png->samples[2 * i] | (png->samples[2 * i + 1] << 8));
    }
  } else {
    std::copy_n(png->samples.begin(), image.size(), image.begin());
  }
  return image;
}

Gray16Image load_png16(const std::filesystem::path& path) { return decode_png16(read_file(path)); }

Bytes encode_png(const GrayImage& image) {
  return encode_png_raw(image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 8, image.values(),
                        static_cast<std::size_t>(image.width()));
}

Bytes encode_png(const RgbImage& image) {
  static_assert(sizeof(Rgb) == 3);
  std::span<const std::uint8_t> samples(reinterpret_cast<const std::uint8_t*>(image.values().data()),
                                        image.size() * 3);
  return encode_png_raw(image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, samples,
                        static_cast<std::size_t>(image.width()) * 3);
}

Bytes encode_png(const Gray16Image& image) {
  std::span<const std::uint8_t> samples(reinterpret_cast<const std::uint8_t*>(image.values().data()),
                                        image.size() * 2);
  return encode_png_raw(image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 16, samples,
                        static_cast<std::size_t>(image.width()) * 2);
}

Bytes encode_bmp(const RgbImage& image) {
  const std::size_t stride = ((24 * static_cast<std::size_t>(image.width()) + 31) / 32) * 4;
  const std::size_t data_size = stride * static_cast<std::size_t>(image.height());
  Bytes out(54 + data_size, 0);
  auto put32 = [&](std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  };
  out[0] = 'B';
  out[1] = 'M';
  put32(2, static_cast<std::uint32_t>(out.size()));
  put32(10, 54);
  put32(14, 40);
  put32(18, static_cast<std::uint32_t>(image.width()));
  put32(22, static_cast<std::uint32_t>(image.height()));
  out[26] = 1;
  out[28] = 24;
  put32(34, static_cast<std::uint32_t>(data_size));
  for (int y = 0; y < image.height(); ++y) {
    const std::size_t row_at = 54 + static_cast<std::size_t>(image.height() - 1 - y) * stride;
    for (int x = 0; x < image.width(); ++x) {
      const Rgb& p = image(x, y);
      out[row_at + 3 * x] = p.b;
      out[row_at + 3 * x + 1] = p.g;
      out[row_at + 3 * x + 2] = p.r;
    }
  }
  return out;
}

Bytes read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(Errc::FileNotFound, "file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open: " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

}  // namespace crystal
