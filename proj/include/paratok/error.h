#ifndef PARATOK_ERROR_H_
#define PARATOK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace paratok {

enum class ErrorKind {
  kEmptyCorpus,
  kCapTooSmall,
  kIndexOutOfRange,
  kNotInVocabulary,
  kProviderFailure,
  kMissingLexicon,
  kMissingMonolingualVocab,
  kCapExceededBySpecials,
  kUnknownLanguageToken,
  kZeroDimension,
  kPositionOverflow,
  kIdOutOfRange,
  kDimensionMismatch,
  kNoWords,
  kZeroTokenSentence,
  kDegenerateZeroVector,
  kRankDeficient,
  kFileNotFound,
  kNotUtf8Fatal,
  kInvalidArgument,
  kInvalidFormat,
  kIoError,
  kValidation,
};

// Stable name of the error kind, e.g. "FileNotFound".
std::string_view error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const { return error_name(kind_); }
  // Message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace paratok

#endif  // PARATOK_ERROR_H_
