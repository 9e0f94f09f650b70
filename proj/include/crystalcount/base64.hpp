#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crystal {

std::string base64_encode(std::span<const std::uint8_t> bytes);

/// Standard alphabet; padding optional, ASCII whitespace ignored. Throws
/// Error(InvalidParameter) on any other character or a dangling sextet.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace crystal
