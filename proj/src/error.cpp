#include "klg/error.hpp"

namespace klg {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedPayload: return "MalformedPayload";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::UnsupportedMaxval: return "UnsupportedMaxval";
    case Errc::NotBinary: return "NotBinary";
    case Errc::NoSkinDetected: return "NoSkinDetected";
    case Errc::EmptyMask: return "EmptyMask";
    case Errc::DegenerateImage: return "DegenerateImage";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::EmptyTemplateSet: return "EmptyTemplateSet";
    case Errc::EmptySampleSet: return "EmptySampleSet";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& detail) {
  std::string msg(errc_name(code));
  if (!detail.empty()) {
    msg += " (";
    msg += detail;
    msg += ')';
  }
  return msg;
}

}  // namespace

Error::Error(Errc code, std::string detail)
    : std::runtime_error(compose(code, detail)), code_(code), detail_(std::move(detail)) {}

Error::Error(Errc code, std::string detail, const std::string& message)
    : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

PnmError::PnmError(Errc code, std::size_t offset, std::string detail)
    : Error(code, "byte " + std::to_string(offset) + ": " + detail), offset_(offset) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.code(), cause.detail(), stage + ": " + std::string(errc_name(cause.code()))),
      stage_(std::move(stage)) {}

}  // namespace klg
