#ifndef PARATOK_CORPUS_H_
#define PARATOK_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace paratok {

inline constexpr double kMaxReplacementRate = 0.01;

struct IngestResult {
  std::vector<std::string> lines;
  std::size_t total_bytes = 0;
  std::size_t replaced_bytes = 0;  // invalid UTF-8 bytes replaced by U+FFFD

  double replacement_rate() const {
    return total_bytes ? static_cast<double>(replaced_bytes) /
                             static_cast<double>(total_bytes)
                       : 0.0;
  }
};

// Lines with trailing whitespace (including CR) stripped; blank lines
// skipped; invalid UTF-8 replaced. Throws NotUtf8Fatal when more than 1% of
// the bytes were invalid.
IngestResult ingest_text(std::string_view contents);
// Throws FileNotFound.
IngestResult ingest_corpus(const std::filesystem::path& path);

}  // namespace paratok

#endif  // PARATOK_CORPUS_H_
