#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wordease {

enum class ErrorCode {
  MissingFile,
  MalformedLine,
  EmptyDictionary,
  OutOfVocabulary,
  DegenerateLabels,
  DimensionMismatch,
  OutOfRange,
  EmptyList,
  OverlappingSeeds,
  AlreadyLabeled,
  NotHighlighted,
  ExhaustedPool,
  NoSynonymsKnown,
  RemoteUnavailable,
  ImmutableToken,
  EmptyCorpus,
  MissingColumn,
  TooFewWords,
  EmptyTestSet,
  MixedScenarios,
  UnknownSession,
  InvalidConfig,
  InvalidFormat,
  InvalidArgument,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyDictionary: return "EmptyDictionary";
    case ErrorCode::OutOfVocabulary: return "OutOfVocabulary";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::OverlappingSeeds: return "OverlappingSeeds";
    case ErrorCode::AlreadyLabeled: return "AlreadyLabeled";
    case ErrorCode::NotHighlighted: return "NotHighlighted";
    case ErrorCode::ExhaustedPool: return "ExhaustedPool";
    case ErrorCode::NoSynonymsKnown: return "NoSynonymsKnown";
    case ErrorCode::RemoteUnavailable: return "RemoteUnavailable";
    case ErrorCode::ImmutableToken: return "ImmutableToken";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::TooFewWords: return "TooFewWords";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::MixedScenarios: return "MixedScenarios";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidFormat: return "InvalidFormat";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (service, CLI) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wordease
