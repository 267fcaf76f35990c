#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergolab {

enum class Errc {
  DimensionMismatch,
  NonPositiveDefiniteGram,
  BadDimension,
  NonFinite,
  RowOutOfRange,
  SpectralRadiusTooLarge,
  DegenerateRow,
  SingularResolvent,
  NonPositiveValues,
  NonSimplePole,
  WindowTooSmall,
  BadTruncation,
  TooFewNodes,
  Overflow,
  InvalidArgument,
  ParseError,
  IoError,
  ConfigError,
  InternalMismatch,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ergolab
