#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cinesim {

enum class ErrorCode {
  kMalformedTimestamp,
  kEmptyDocument,
  kEmptyVocabulary,
  kInvalidArgument,
  kUnreadableImage,
  kDimensionMismatch,
  kUnknownLabel,
  kEmptySequence,
  kUnknownTag,
  kWeightCountMismatch,
  kMissingDependency,
  kConfigInvalid,
  kIo,
  kParse,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedTimestamp: return "MalformedTimestamp";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnreadableImage: return "UnreadableImage";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kWeightCountMismatch: return "WeightCountMismatch";
    case ErrorCode::kMissingDependency: return "MissingDependency";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace cinesim
