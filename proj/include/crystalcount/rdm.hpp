#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "crystalcount/starconvex.hpp"

namespace crystal {

/// RDM container, all integers and floats little-endian:
///   "RDM1" | u32 H | u32 W | u32 R | H*W f32 prob | H*W*R f32 dist
/// Total size 16 + 4*H*W*(1+R) bytes.
std::vector<std::uint8_t> encode_rdm(const RadialMap& map);

/// Errors: BadMagic, TruncatedFile (body shorter or longer than the header
/// implies), DimensionOverflow (zero or unaddressable dimensions).
RadialMap decode_rdm(std::span<const std::uint8_t> bytes);

RadialMap read_rdm(const std::filesystem::path& path);
void write_rdm(const RadialMap& map, const std::filesystem::path& path);

}  // namespace crystal
