#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pausecws {

enum class ErrorKind {
  IllegalTagSequence,
  LengthMismatch,
  NoLegalPath,
  SentenceTooShort,
  IndexOutOfRange,
  EmptyDataset,
  ParseError,
  NonMonotoneFrames,
  UnscoredPause,
  SentenceMismatch,
  InvalidArgument,
  IoError,
};

std::string_view error_name(ErrorKind kind) noexcept;

// Every library failure is reported through this type; kind() names the
// failure class and what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  // what() without the leading "Name: ".
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace pausecws
