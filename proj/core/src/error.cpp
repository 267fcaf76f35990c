#include "ergolab/error.hpp"

namespace ergolab {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonPositiveDefiniteGram: return "NonPositiveDefiniteGram";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NonFinite: return "NonFinite";
    case Errc::RowOutOfRange: return "RowOutOfRange";
    case Errc::SpectralRadiusTooLarge: return "SpectralRadiusTooLarge";
    case Errc::DegenerateRow: return "DegenerateRow";
    case Errc::SingularResolvent: return "SingularResolvent";
    case Errc::NonPositiveValues: return "NonPositiveValues";
    case Errc::NonSimplePole: return "NonSimplePole";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::BadTruncation: return "BadTruncation";
    case Errc::TooFewNodes: return "TooFewNodes";
    case Errc::Overflow: return "Overflow";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InternalMismatch: return "InternalMismatch";
  }
  return "Unknown";
}

}  // namespace ergolab
