#include "paratok/corpus.h"

#include "paratok/error.h"
#include "paratok/utf8.h"
#include "paratok/vocabulary.h"

namespace paratok {

IngestResult ingest_text(std::string_view contents) {
  IngestResult result;
  result.total_bytes = contents.size();
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    const std::string_view raw = contents.substr(start, end - start);
    start = end + 1;

    utf8::DecodeResult decoded = utf8::decode(raw);
    result.replaced_bytes += decoded.invalid_bytes;
    std::u32string& cps = decoded.code_points;
    while (!cps.empty() && utf8::is_whitespace(cps.back())) cps.pop_back();
    bool blank = true;
    for (char32_t cp : cps) {
      if (!utf8::is_whitespace(cp)) {
        blank = false;
        break;
      }
    }
    if (!blank) result.lines.push_back(utf8::encode(cps));
  }
  if (result.replacement_rate() > kMaxReplacementRate) {
    throw Error(ErrorKind::kNotUtf8Fatal,
                std::to_string(result.replaced_bytes) + " of " +
                    std::to_string(result.total_bytes) + " bytes are not valid UTF-8");
  }
  return result;
}

IngestResult ingest_corpus(const std::filesystem::path& path) {
  try {
    return ingest_text(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNotUtf8Fatal) {
      throw Error(e.kind(), path.string() + ": " + e.what());
    }
    throw;
  }
}

}  // namespace paratok
