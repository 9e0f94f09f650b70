#include <gtest/gtest.h>

#include <filesystem>

#include "crystalcount/base64.hpp"
#include "crystalcount/image_io.hpp"
#include "phantom.hpp"

using namespace crystal;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::Io;
}

}  // namespace

TEST(Png, GrayRoundTrip) {
  const GrayImage img = synth::random_image(37, 21, 1);
  EXPECT_EQ(decode_image(encode_png(img)), img);
}

TEST(Png, RgbDecodesToLuma) {
  RgbImage rgb(3, 1);
  rgb(0, 0) = {255, 0, 0};
  rgb(1, 0) = {0, 255, 0};
  rgb(2, 0) = {10, 20, 30};
  const GrayImage gray = decode_image(encode_png(rgb));
  EXPECT_EQ(gray(0, 0), luma(255, 0, 0));
  EXPECT_EQ(gray(1, 0), luma(0, 255, 0));
  EXPECT_EQ(gray(2, 0), luma(10, 20, 30));
  EXPECT_EQ(luma(255, 255, 255), 255);
}

TEST(Png, SixteenBitRoundTrip) {
  Gray16Image img(5, 4);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<std::uint16_t>(i * 3001);
  EXPECT_EQ(decode_png16(encode_png(img)), img);
  // 8-bit consumers see the high byte.
  EXPECT_EQ(decode_image(encode_png(img))(1, 0), static_cast<std::uint8_t>(3001 >> 8));
}

TEST(Png, SixteenBitRejectsColor) {
  EXPECT_EQ(code_of([] { decode_png16(encode_png(RgbImage(2, 2))); }), Errc::UnsupportedFormat);
}

TEST(Bmp, RoundTripThroughLuma) {
  RgbImage rgb(7, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) {
      const auto v = static_cast<std::uint8_t>(x * 30 + y);
      rgb(x, y) = {v, v, v};
    }
  }
  const GrayImage gray = decode_image(encode_bmp(rgb));
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) EXPECT_EQ(gray(x, y), rgb(x, y).r);
  }
}

TEST(Decode, ErrorsAreClassified) {
  const Bytes text = {'h', 'e', 'l', 'l', 'o', ' ', 'w', 'o', 'r', 'l', 'd'};
  EXPECT_EQ(code_of([&] { decode_image(text); }), Errc::UnsupportedFormat);
  EXPECT_EQ(code_of([] { decode_image(Bytes{}); }), Errc::UnsupportedFormat);

  Bytes png = encode_png(GrayImage(16, 16, 9));
  png.resize(png.size() / 2);
  EXPECT_EQ(code_of([&] { decode_image(png); }), Errc::CorruptImage);

  Bytes bmp = encode_bmp(RgbImage(16, 16));
  bmp.resize(40);
  EXPECT_EQ(code_of([&] { decode_image(bmp); }), Errc::CorruptImage);
}

TEST(Files, MissingFileIsFileNotFound) {
  EXPECT_EQ(code_of([] { load_image("/nonexistent/definitely/missing.png"); }), Errc::FileNotFound);
}

TEST(Files, WriteThenLoad) {
  const auto path = std::filesystem::temp_directory_path() / "crystalcount_io_test.png";
  const GrayImage img = synth::random_image(9, 9, 4);
  write_file(path, encode_png(img));
  EXPECT_EQ(load_image(path), img);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([] { write_file("/nonexistent/dir/out.png", Bytes{1}); }), Errc::Io);
}

TEST(Base64, RoundTripAndPadding) {
  EXPECT_EQ(base64_encode(Bytes{}), "");
  EXPECT_EQ(base64_encode(Bytes{'f'}), "Zg==");
  EXPECT_EQ(base64_encode(Bytes{'f', 'o'}), "Zm8=");
  EXPECT_EQ(base64_encode(Bytes{'f', 'o', 'o'}), "Zm9v");
  Bytes all(256);
  for (int i = 0; i < 256; ++i) all[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(base64_decode(base64_encode(all)), all);
  EXPECT_EQ(base64_decode("Zg"), Bytes{'f'});
  EXPECT_EQ(base64_decode("Zg="), Bytes{'f'});
  EXPECT_EQ(base64_decode(" Zm9v\r\nZg== "), (Bytes{'f', 'o', 'o', 'f'}));
}

TEST(Base64, RejectsMalformedInput) {
  for (const char* bad : {"Z", "Zm9vZ", "Zm9v!", "Zg==Zg==", "Zg=a"}) {
    EXPECT_EQ(code_of([&] { base64_decode(bad); }), Errc::InvalidParameter) << bad;
  }
}
