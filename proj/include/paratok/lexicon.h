#ifndef PARATOK_LEXICON_H_
#define PARATOK_LEXICON_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paratok/utf8.h"
#include "paratok/vocabulary.h"

namespace paratok {

enum class LexiconStatus {
  kAccepted,
  kRejectedMultiword,
  kRejectedMalformed,
  kRejectedBacktranslation,
  kMissing,
};
inline constexpr std::size_t kNumLexiconStatuses = 5;

std::string_view status_name(LexiconStatus status);
// Throws InvalidFormat for an unknown name.
LexiconStatus parse_status(std::string_view name);

struct LexiconEntry {
  std::string source;
  std::string target;
  std::string back;
  LexiconStatus status = LexiconStatus::kMissing;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Source-to-target token mapping for one language pair. Entries keep the
// order of the source words they were built from.
class BilingualLexicon {
 public:
  BilingualLexicon() = default;
  BilingualLexicon(std::string src, std::string tgt,
                   std::vector<LexiconEntry> entries);

  const std::string& source_language() const { return src_; }
  const std::string& target_language() const { return tgt_; }
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const LexiconEntry* find(std::string_view source) const;
  std::size_t count(LexiconStatus status) const;

  // TSV rows: source \t target \t back \t status.
  std::string to_tsv() const;
  void save(const std::filesystem::path& path) const;
  static BilingualLexicon parse_tsv(std::string_view contents, std::string src,
                                    std::string tgt);
  static BilingualLexicon load(const std::filesystem::path& path,
                               std::string src, std::string tgt);

  friend bool operator==(const BilingualLexicon& a, const BilingualLexicon& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.entries_ == b.entries_;
  }

 private:
  std::string src_, tgt_;
  std::vector<LexiconEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;
  // Empty optional means "no translation". May throw; failures surface as
  // ProviderFailure naming the token.
  virtual std::optional<std::string> translate(std::string_view token,
                                               std::string_view src_lang,
                                               std::string_view tgt_lang) const = 0;
  // Whether translate() may be called from several threads at once.
  virtual bool concurrent_safe() const { return false; }
};

// In-memory (src, tgt, token) -> translation table.
class MapProvider : public TranslationProvider {
 public:
  MapProvider() = default;
  void add(std::string src_lang, std::string tgt_lang, std::string source,
           std::string target);
  // Adds the pair in both directions.
  void add_pair(std::string_view src_lang, std::string_view tgt_lang,
                std::string_view source, std::string_view target);

  std::optional<std::string> translate(std::string_view token,
                                       std::string_view src_lang,
                                       std::string_view tgt_lang) const override;
  bool concurrent_safe() const override { return true; }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> table_;
};

// Dictionary file with rows: src_lang \t tgt_lang \t source \t target.
// Blank lines and lines starting with '#' are skipped.
class TsvProvider : public MapProvider {
 public:
  static TsvProvider load(const std::filesystem::path& path);
  static TsvProvider parse(std::string_view contents);
};

// Scripts observed in a corpus plus Common and Inherited.
using ScriptProfile = std::set<utf8::Script>;
ScriptProfile script_profile(std::span<const std::string> corpus);

struct AlignOptions {
  // Empty profile disables the script check.
  ScriptProfile target_scripts;
  bool lowercase_target = true;
};

// Validity predicates applied before back-translation. Returns the
// rejection status, or Accepted when the target passes.
LexiconStatus target_validity(std::string_view target,
                              const ScriptProfile& target_scripts);

bool backtranslation_matches(std::string_view source, std::string_view back);

// Throws ProviderFailure.
BilingualLexicon align_word_tokens(std::span<const std::string> source_words,
                                   const TranslationProvider& provider,
                                   std::string_view src, std::string_view tgt,
                                   const AlignOptions& options = {});

struct AlignmentCoverage {
  std::size_t accepted = 0;
  std::size_t word_tokens = 0;
  std::size_t non_special = 0;
  double word_type_fraction = 0.0;
  double total_fraction = 0.0;
};

AlignmentCoverage alignment_coverage(const BilingualLexicon& lexicon,
                                     const Vocabulary& full_vocab,
                                     std::span<const std::string> language_tags);

}  // namespace paratok

#endif  // PARATOK_LEXICON_H_
