#include "paratok/lexicon.h"

#include <algorithm>
#include <exception>
#include <future>
#include <thread>

#include "paratok/error.h"
#include "paratok/taxonomy.h"

namespace paratok {

namespace {

constexpr std::array<std::string_view, kNumLexiconStatuses> kStatusNames = {
    "Accepted", "RejectedMultiword", "RejectedMalformed",
    "RejectedBacktranslation", "Missing"};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

template <typename Fn>
void for_each_line(std::string_view contents, Fn&& fn) {
  std::size_t start = 0, line_no = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    start = end + 1;
  }
}

// True if `text` holds a bracketed special such as "[SEP]", "[HA]" or
// "[unused3]".
bool contains_bracketed_special(std::string_view text) {
  std::size_t open = text.find('[');
  while (open != std::string_view::npos) {
    const std::size_t close = text.find(']', open + 1);
    if (close == std::string_view::npos) return false;
    const std::string_view inner = text.substr(open + 1, close - open - 1);
    const bool upper_code =
        !inner.empty() && std::all_of(inner.begin(), inner.end(), [](char c) {
          return c >= 'A' && c <= 'Z';
        });
    if (upper_code || is_placeholder_token(text.substr(open, close - open + 1))) {
      return true;
    }
    open = text.find('[', open + 1);
  }
  return false;
}

std::string escape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out += field[i];
      continue;
    }
    switch (field[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += field[i];
    }
  }
  return out;
}

}  // namespace

std::string_view status_name(LexiconStatus status) {
  return kStatusNames[static_cast<std::size_t>(status)];
}

LexiconStatus parse_status(std::string_view name) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == name) return static_cast<LexiconStatus>(i);
  }
  throw Error(ErrorKind::kInvalidFormat,
              "unknown lexicon status '" + std::string(name) + "'");
}

BilingualLexicon::BilingualLexicon(std::string src, std::string tgt,
                                   std::vector<LexiconEntry> entries)
    : src_(std::move(src)), tgt_(std::move(tgt)), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].source, i).second) {
      throw Error(ErrorKind::kInvalidFormat,
                  "duplicate lexicon source '" + entries_[i].source + "'");
    }
  }
}

const LexiconEntry* BilingualLexicon::find(std::string_view source) const {
  auto it = index_.find(source);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t BilingualLexicon::count(LexiconStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [status](const LexiconEntry& e) { return e.status == status; }));
}

std::string BilingualLexicon::to_tsv() const {
  std::string out;
  for (const LexiconEntry& e : entries_) {
    out += escape_field(e.source);
    out += '\t';
    out += escape_field(e.target);
    out += '\t';
    out += escape_field(e.back);
    out += '\t';
    out += status_name(e.status);
    out += '\n';
  }
  return out;
}

void BilingualLexicon::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_tsv());
}

BilingualLexicon BilingualLexicon::parse_tsv(std::string_view contents,
                                             std::string src, std::string tgt) {
  std::vector<LexiconEntry> entries;
  for_each_line(contents, [&](std::string_view line, std::size_t line_no) {
    if (line.empty()) return;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw Error(ErrorKind::kInvalidFormat,
                  "lexicon line " + std::to_string(line_no) +
                      ": expected 4 tab-separated fields");
    }
    entries.push_back({unescape_field(fields[0]), unescape_field(fields[1]),
                       unescape_field(fields[2]), parse_status(fields[3])});
  });
  return BilingualLexicon(std::move(src), std::move(tgt), std::move(entries));
}

BilingualLexicon BilingualLexicon::load(const std::filesystem::path& path,
                                        std::string src, std::string tgt) {
  return parse_tsv(read_file(path), std::move(src), std::move(tgt));
}

namespace {

std::string provider_key(std::string_view src, std::string_view tgt,
                         std::string_view token) {
  std::string key;
  key.reserve(src.size() + tgt.size() + token.size() + 2);
  key.append(src).append(1, '\t').append(tgt).append(1, '\t').append(token);
  return key;
}

}  // namespace

void MapProvider::add(std::string src_lang, std::string tgt_lang,
                      std::string source, std::string target) {
  table_[provider_key(src_lang, tgt_lang, source)] = std::move(target);
}

void MapProvider::add_pair(std::string_view src_lang, std::string_view tgt_lang,
                           std::string_view source, std::string_view target) {
  add(std::string(src_lang), std::string(tgt_lang), std::string(source),
      std::string(target));
  add(std::string(tgt_lang), std::string(src_lang), std::string(target),
      std::string(source));
}

std::optional<std::string> MapProvider::translate(std::string_view token,
                                                  std::string_view src_lang,
                                                  std::string_view tgt_lang) const {
  auto it = table_.find(provider_key(src_lang, tgt_lang, token));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

TsvProvider TsvProvider::parse(std::string_view contents) {
  TsvProvider provider;
  for_each_line(contents, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw Error(ErrorKind::kInvalidFormat,
                  "dictionary line " + std::to_string(line_no) +
                      ": expected src_lang, tgt_lang, source, target");
    }
    provider.add(std::string(fields[0]), std::string(fields[1]),
                 std::string(fields[2]), std::string(fields[3]));
  });
  return provider;
}

TsvProvider TsvProvider::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

ScriptProfile script_profile(std::span<const std::string> corpus) {
  ScriptProfile profile = {utf8::Script::kCommon, utf8::Script::kInherited};
  for (const std::string& line : corpus) {
    for (char32_t cp : utf8::to_u32(line)) profile.insert(utf8::script_of(cp));
  }
  return profile;
}

LexiconStatus target_validity(std::string_view target,
                              const ScriptProfile& target_scripts) {
  if (target.empty()) return LexiconStatus::kMissing;
  const utf8::DecodeResult decoded = utf8::decode(target);
  if (std::any_of(decoded.code_points.begin(), decoded.code_points.end(),
                  utf8::is_whitespace)) {
    return LexiconStatus::kRejectedMultiword;
  }
  if (decoded.invalid_bytes > 0 ||
      std::any_of(decoded.code_points.begin(), decoded.code_points.end(),
                  utf8::is_control) ||
      contains_bracketed_special(target) ||
      target.substr(0, kContinuationPrefix.size()) == kContinuationPrefix) {
    return LexiconStatus::kRejectedMalformed;
  }
  if (!target_scripts.empty()) {
    for (char32_t cp : decoded.code_points) {
      if (!target_scripts.contains(utf8::script_of(cp))) {
        return LexiconStatus::kRejectedMalformed;
      }
    }
  }
  return LexiconStatus::kAccepted;
}

bool backtranslation_matches(std::string_view source, std::string_view back) {
  return !back.empty() && utf8::to_lower(source) == utf8::to_lower(back);
}

namespace {

LexiconEntry align_one(const std::string& source,
                       const TranslationProvider& provider, std::string_view src,
                       std::string_view tgt, const AlignOptions& options) {
  LexiconEntry entry;
  entry.source = source;
  std::optional<std::string> target;
  try {
    target = provider.translate(source, src, tgt);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kProviderFailure, "translating '" + source + "': " + e.what());
  }
  if (!target || target->empty()) {
    entry.status = LexiconStatus::kMissing;
    return entry;
  }
  entry.target = options.lowercase_target ? utf8::to_lower(*target) : *target;
  // Validated both raw and lowercased.
  entry.status = target_validity(*target, options.target_scripts);
  if (entry.status == LexiconStatus::kAccepted) {
    entry.status = target_validity(entry.target, options.target_scripts);
  }
  if (entry.status != LexiconStatus::kAccepted) return entry;

  std::optional<std::string> back;
  try {
    back = provider.translate(entry.target, tgt, src);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kProviderFailure,
                "back-translating '" + entry.target + "': " + e.what());
  }
  entry.back = back.value_or("");
  entry.status = backtranslation_matches(source, entry.back)
                     ? LexiconStatus::kAccepted
                     : LexiconStatus::kRejectedBacktranslation;
  return entry;
}

}  // namespace

BilingualLexicon align_word_tokens(std::span<const std::string> source_words,
                                   const TranslationProvider& provider,
                                   std::string_view src, std::string_view tgt,
                                   const AlignOptions& options) {
  std::vector<LexiconEntry> entries(source_words.size());
  const std::size_t workers =
      provider.concurrent_safe() && source_words.size() >= 4096
          ? std::max(1u, std::min(8u, std::thread::hardware_concurrency()))
          : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < source_words.size(); ++i) {
      entries[i] = align_one(source_words[i], provider, src, tgt, options);
    }
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (source_words.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < source_words.size(); begin += chunk) {
      const std::size_t end = std::min(source_words.size(), begin + chunk);
      jobs.push_back(std::async(std::launch::async, [&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) {
          entries[i] = align_one(source_words[i], provider, src, tgt, options);
        }
      }));
    }
    // Rethrows the failure of the earliest chunk.
    for (auto& job : jobs) job.wait();
    for (auto& job : jobs) job.get();
  }
  return BilingualLexicon(std::string(src), std::string(tgt), std::move(entries));
}

AlignmentCoverage alignment_coverage(const BilingualLexicon& lexicon,
                                     const Vocabulary& full_vocab,
                                     std::span<const std::string> language_tags) {
  AlignmentCoverage cov;
  for (const std::string& t : full_vocab.tokens()) {
    const TokenCategory c =
        classify_token(t, full_vocab.continuation_prefix(), language_tags);
    if (c == TokenCategory::kSpecial || c == TokenCategory::kLanguageTag) continue;
    ++cov.non_special;
    if (c == TokenCategory::kWord) ++cov.word_tokens;
  }
  for (const LexiconEntry& e : lexicon.entries()) {
    if (e.status == LexiconStatus::kAccepted && full_vocab.contains(e.source)) {
      ++cov.accepted;
    }
  }
  if (cov.word_tokens) {
    cov.word_type_fraction =
        static_cast<double>(cov.accepted) / static_cast<double>(cov.word_tokens);
  }
  if (cov.non_special) {
    cov.total_fraction =
        static_cast<double>(cov.accepted) / static_cast<double>(cov.non_special);
  }
  return cov;
}

}  // namespace paratok
