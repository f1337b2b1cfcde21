#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dialkit {

// Named failure conditions raised across the toolkit. Total functions never
// throw; everything else reports one of these through dialkit::Error.
enum class ErrorCode {
  // audio
  UndecodableAudio,
  SpecMismatch,
  MissingChannelMap,
  ChannelCountMismatch,
  // corpus
  UnknownIsoCode,
  InvalidCountry,
  InvalidSubdivision,
  SubdivisionWithoutCountry,
  MalformedDialectCode,
  UnknownLocation,
  MissingAudio,
  MalformedRow,
  EmptyCorpus,
  InvalidArgument,
  // profiling
  OutOfRangeScore,
  MissingScores,
  LengthMismatch,
  ZeroVariance,
  DuplicateUtteranceId,
  UnknownUtteranceId,
  // io / config
  Io,
  Config,
  MalformedTable,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace dialkit
