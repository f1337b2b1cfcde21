#include "dialkit/error.hpp"

namespace dialkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UndecodableAudio: return "UndecodableAudio";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::MissingChannelMap: return "MissingChannelMap";
    case ErrorCode::ChannelCountMismatch: return "ChannelCountMismatch";
    case ErrorCode::UnknownIsoCode: return "UnknownIsoCode";
    case ErrorCode::InvalidCountry: return "InvalidCountry";
    case ErrorCode::InvalidSubdivision: return "InvalidSubdivision";
    case ErrorCode::SubdivisionWithoutCountry: return "SubdivisionWithoutCountry";
    case ErrorCode::MalformedDialectCode: return "MalformedDialectCode";
    case ErrorCode::UnknownLocation: return "UnknownLocation";
    case ErrorCode::MissingAudio: return "MissingAudio";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRangeScore: return "OutOfRangeScore";
    case ErrorCode::MissingScores: return "MissingScores";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DuplicateUtteranceId: return "DuplicateUtteranceId";
    case ErrorCode::UnknownUtteranceId: return "UnknownUtteranceId";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::MalformedTable: return "MalformedTable";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace dialkit
