#include "crystalcount/rdm.hpp"

#include <bit>
#include <cstring>

#include "crystalcount/image_io.hpp"

namespace crystal {
namespace {

constexpr char kMagic[4] = {'R', 'D', 'M', '1'};
constexpr std::size_t kHeaderBytes = 16;
// 2^31 floats (8 GiB) is far beyond any camera frame.
constexpr std::uint64_t kMaxFloats = std::uint64_t{1} << 31;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint32_t>(in[at]) | (static_cast<std::uint32_t>(in[at + 1]) << 8) |
         (static_cast<std::uint32_t>(in[at + 2]) << 16) | (static_cast<std::uint32_t>(in[at + 3]) << 24);
}

void put_floats(std::vector<std::uint8_t>& out, std::span<const float> values) {
  for (float v : values) put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void get_floats(std::span<const std::uint8_t> in, std::size_t at, std::span<float> values) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::bit_cast<float>(get_u32(in, at + 4 * i));
}

}  // namespace

std::vector<std::uint8_t> encode_rdm(const RadialMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * (map.prob_values().size() + map.dist_values().size()));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.rays()));
  put_floats(out, map.prob_values());
  put_floats(out, map.dist_values());
  return out;
}

RadialMap decode_rdm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::BadMagic, "not an RDM file (bad magic)");
  }
  if (bytes.size() < kHeaderBytes) throw Error(Errc::TruncatedFile, "RDM header truncated");
  const std::uint64_t height = get_u32(bytes, 4);
  const std::uint64_t width = get_u32(bytes, 8);
  const std::uint64_t rays = get_u32(bytes, 12);
  if (height == 0 || width == 0 || rays == 0) {
    throw Error(Errc::DimensionOverflow, "RDM header has a zero dimension");
  }
  if (height > INT32_MAX || width > INT32_MAX || rays > INT32_MAX) {
    throw Error(Errc::DimensionOverflow, "RDM dimension exceeds the supported range");
  }
  // Each factor is < 2^31, so the pixel count fits; check before adding rays.
  const std::uint64_t pixels = height * width;
  if (pixels > kMaxFloats || pixels * (rays + 1) > kMaxFloats) {
    throw Error(Errc::DimensionOverflow, "RDM header implies more data than can be addressed");
  }
  const std::uint64_t expected = kHeaderBytes + 4 * pixels * (rays + 1);
  if (bytes.size() != expected) {
    throw Error(Errc::TruncatedFile, "RDM body is " + std::to_string(bytes.size()) + " bytes, header implies " +
                                         std::to_string(expected));
  }
  RadialMap map(static_cast<int>(width), static_cast<int>(height), static_cast<int>(rays));
  get_floats(bytes, kHeaderBytes, map.prob_values());
  get_floats(bytes, kHeaderBytes + 4 * pixels, map.dist_values());
  return map;
}

RadialMap read_rdm(const std::filesystem::path& path) { return decode_rdm(read_file(path)); }

void write_rdm(const RadialMap& map, const std::filesystem::path& path) { write_file(path, encode_rdm(map)); }

}  // namespace crystal
