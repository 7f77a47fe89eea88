#include "pausecws/error.hpp"

namespace pausecws {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IllegalTagSequence: return "IllegalTagSequence";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NoLegalPath: return "NoLegalPath";
    case ErrorKind::SentenceTooShort: return "SentenceTooShort";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotoneFrames: return "NonMonotoneFrames";
    case ErrorKind::UnscoredPause: return "UnscoredPause";
    case ErrorKind::SentenceMismatch: return "SentenceMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

}  // namespace pausecws
