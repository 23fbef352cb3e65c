#include "layersep/error.hpp"

namespace layersep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::LayerMismatch: return "LayerMismatch";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::SentinelPresent: return "SentinelPresent";
    case ErrorCode::EmptyClassAfterSampling: return "EmptyClassAfterSampling";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& detail,
                    const std::optional<int>& layer) {
  std::string msg(to_string(code));
  if (layer) msg += " (layer " + std::to_string(*layer) + ")";
  msg += ": ";
  msg += detail;
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<int> layer)
    : std::runtime_error(compose(code, message, layer)),
      code_(code),
      detail_(message),
      layer_(layer) {}

Error Error::with_layer(int layer) const { return Error(code_, detail_, layer); }

}  // namespace layersep
