#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace layersep {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteValue,
  InvalidLabel,
  TooFewPoints,
  EmptyClass,
  DegenerateData,
  LayerMismatch,
  ConstantSeries,
  SentinelPresent,
  EmptyClassAfterSampling,
  InvalidFraction,
  InvalidArgument,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this type. `layer()` is set when
/// the failure happened while processing one layer of a stack.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> layer = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<int>& layer() const noexcept { return layer_; }

  /// Same error, annotated with the offending layer index.
  Error with_layer(int layer) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<int> layer_;
};

}  // namespace layersep
