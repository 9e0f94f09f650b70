#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crystal {

enum class Errc {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  InvalidBlockSize,
  InvalidThresholds,
  InvalidKernel,
  InvalidParameter,
  ImageSmallerThanTile,
  DimensionMismatch,
  BadMagic,
  TruncatedFile,
  DimensionOverflow,
  Io,
  MissingRadialMap,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception. Every failure carries a machine-readable code so
/// front ends can map it (exit status, HTTP status) without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace crystal
