#pragma once

#include <stdexcept>
#include <string>

namespace hdp {

enum class Errc {
  // canonical json
  NonFiniteNumber,
  UnpairedSurrogate,
  MalformedJson,
  DuplicateKey,
  IntegerOutOfRange,
  // crypto
  BadSeedLength,
  BadKeyLength,
  InvalidBase64Url,
  // token schema
  MissingField,
  WrongFieldType,
  UnknownField,
  // lifecycle
  ChainNotEmpty,
  PriorHopUnsigned,
  NewHopAlreadySigned,
  InvalidRequest,
  TokenExpired,
  MaxHopsReached,
  StructurallyInvalid,
  // transport
  DuplicateTokenIdConflict,
  DuplicateKid,
  UnsupportedAlg,
  // environment
  IoError,
};

inline const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonFiniteNumber: return "NonFiniteNumber";
    case Errc::UnpairedSurrogate: return "UnpairedSurrogate";
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::IntegerOutOfRange: return "IntegerOutOfRange";
    case Errc::BadSeedLength: return "BadSeedLength";
    case Errc::BadKeyLength: return "BadKeyLength";
    case Errc::InvalidBase64Url: return "InvalidBase64Url";
    case Errc::MissingField: return "MissingField";
    case Errc::WrongFieldType: return "WrongFieldType";
    case Errc::UnknownField: return "UnknownField";
    case Errc::ChainNotEmpty: return "ChainNotEmpty";
    case Errc::PriorHopUnsigned: return "PriorHopUnsigned";
    case Errc::NewHopAlreadySigned: return "NewHopAlreadySigned";
    case Errc::InvalidRequest: return "InvalidRequest";
    case Errc::TokenExpired: return "TokenExpired";
    case Errc::MaxHopsReached: return "MaxHopsReached";
    case Errc::StructurallyInvalid: return "StructurallyInvalid";
    case Errc::DuplicateTokenIdConflict: return "DuplicateTokenIdConflict";
    case Errc::DuplicateKid: return "DuplicateKid";
    case Errc::UnsupportedAlg: return "UnsupportedAlg";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

// Single exception type for the library; what() is "<code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hdp
