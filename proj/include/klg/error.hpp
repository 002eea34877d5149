#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace klg {

enum class Errc {
  MalformedHeader,
  MalformedPayload,
  TruncatedPayload,
  UnsupportedMaxval,
  NotBinary,
  NoSkinDetected,
  EmptyMask,
  DegenerateImage,
  TooFewPoints,
  NotSymmetric,
  EmptyTemplateSet,
  EmptySampleSet,
  UnknownLabel,
  InvalidArgument,
  InvalidConfig,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

/// Base error for every failure raised by the library. Pipeline stages attach
/// their stage name so that callers can report exactly where a run failed.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 protected:
  Error(Errc code, std::string detail, const std::string& message);

 private:
  Errc code_;
  std::string detail_;
};

/// PNM parse failure; carries the byte offset where parsing stopped.
class PnmError : public Error {
 public:
  PnmError(Errc code, std::size_t offset, std::string detail);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// An Error raised while running one pipeline stage. what() reads
/// "<stage>: <ErrcName>" so the CLI can print it verbatim.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace klg
