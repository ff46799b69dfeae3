#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace semtag {

enum class ErrorKind {
  UnknownTag,
  FormatError,
  EmptySentence,
  EmptyCorpus,
  DegenerateCounts,
  AlignmentError,
  IncomparableReports,
  UnregisteredPair,
  ArityMismatch,
  NonTerminating,
  EmptySeed,
  ConfigError,
  IoError,
};

/// Exception carrying a machine-checkable kind next to the human message.
class SemtagError : public std::runtime_error {
 public:
  SemtagError(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw SemtagError(kind, message);
}

}  // namespace semtag
