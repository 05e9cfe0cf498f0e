#include "paratok/error.h"

namespace paratok {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kCapTooSmall: return "CapTooSmall";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kNotInVocabulary: return "NotInVocabulary";
    case ErrorKind::kProviderFailure: return "ProviderFailure";
    case ErrorKind::kMissingLexicon: return "MissingLexicon";
    case ErrorKind::kMissingMonolingualVocab: return "MissingMonolingualVocab";
    case ErrorKind::kCapExceededBySpecials: return "CapExceededBySpecials";
    case ErrorKind::kUnknownLanguageToken: return "UnknownLanguageToken";
    case ErrorKind::kZeroDimension: return "ZeroDimension";
    case ErrorKind::kPositionOverflow: return "PositionOverflow";
    case ErrorKind::kIdOutOfRange: return "IdOutOfRange";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNoWords: return "NoWords";
    case ErrorKind::kZeroTokenSentence: return "ZeroTokenSentence";
    case ErrorKind::kDegenerateZeroVector: return "DegenerateZeroVector";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kFileNotFound: return "FileNotFound";
    case ErrorKind::kNotUtf8Fatal: return "NotUtf8Fatal";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInvalidFormat: return "InvalidFormat";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kValidation: return "Validation";
  }
  return "Unknown";
}

}  // namespace paratok
