#include "crystalcount/error.hpp"

namespace crystal {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::FileNotFound: return "file-not-found";
    case Errc::UnsupportedFormat: return "unsupported-format";
    case Errc::CorruptImage: return "corrupt-image";
    case Errc::InvalidBlockSize: return "invalid-block-size";
    case Errc::InvalidThresholds: return "invalid-thresholds";
    case Errc::InvalidKernel: return "invalid-kernel";
    case Errc::InvalidParameter: return "invalid-parameter";
    case Errc::ImageSmallerThanTile: return "image-smaller-than-tile";
    case Errc::DimensionMismatch: return "dimension-mismatch";
    case Errc::BadMagic: return "bad-magic";
    case Errc::TruncatedFile: return "truncated-file";
    case Errc::DimensionOverflow: return "dimension-overflow";
    case Errc::Io: return "io-error";
    case Errc::MissingRadialMap: return "missing-radial-map";
  }
  return "unknown";
}

}  // namespace crystal
