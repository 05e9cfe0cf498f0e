#ifndef PARATOK_PARALLEL_VOCAB_H_
#define PARATOK_PARALLEL_VOCAB_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paratok/lexicon.h"
#include "paratok/vocabulary.h"
#include "paratok/wordpiece.h"

namespace paratok {

inline constexpr std::size_t kDefaultCharSubset = 1000;

struct LanguageSpec {
  std::string code;  // e.g. "ha"
  std::string tag;   // e.g. "[HA]"

  friend bool operator==(const LanguageSpec&, const LanguageSpec&) = default;
};

// "[HA]" for "ha".
std::string default_language_tag(std::string_view code);

struct ParallelConfig {
  std::size_t cap = kDefaultVocabCap;
  std::size_t char_subset = kDefaultCharSubset;
};

// Where a language's monolingual tokens ended up.
struct LanguageFill {
  std::size_t placeholder_filled = 0;  // unaligned word slots
  std::size_t appended = 0;            // after the character subset
  std::size_t unused_placeholders = 0; // word slots left as [unusedN]

  std::size_t total() const { return placeholder_filled + appended; }
  friend bool operator==(const LanguageFill&, const LanguageFill&) = default;
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// k vocabularies of identical size whose word-region indices are aligned
// through the pivot language. Layout of every vocabulary:
//   [specials][language tags][pivot word slots][character subset][fill]
class ParallelVocabSet {
 public:
  ParallelVocabSet(std::vector<LanguageSpec> languages, std::string pivot,
                   std::vector<Vocabulary> vocabs, std::vector<bool> aligned_mask,
                   ParallelConfig config, IndexRange word_region,
                   IndexRange char_region, std::vector<LanguageFill> fill);

  const std::vector<LanguageSpec>& languages() const { return languages_; }
  std::size_t num_languages() const { return languages_.size(); }
  const std::string& pivot() const { return pivot_; }
  std::size_t pivot_index() const;
  std::size_t size() const { return vocabs_.front().size(); }
  const ParallelConfig& config() const { return config_; }

  const Vocabulary& vocab(std::size_t language) const;
  const std::vector<bool>& aligned_mask() const { return aligned_mask_; }
  std::size_t aligned_count() const;
  IndexRange word_region() const { return word_region_; }
  IndexRange char_region() const { return char_region_; }
  const std::vector<LanguageFill>& fill() const { return fill_; }
  std::vector<std::string> language_tags() const;
  std::vector<bool> character_slots() const;

  std::optional<std::size_t> find_code(std::string_view code) const;
  std::optional<std::size_t> find_tag(std::string_view tag) const;

  // Directory with manifest.json, vocab.<code>.txt per language and
  // aligned.mask. The directory is replaced atomically.
  void save(const std::filesystem::path& dir) const;
  static ParallelVocabSet load(const std::filesystem::path& dir);

 private:
  std::vector<LanguageSpec> languages_;
  std::string pivot_;
  std::vector<Vocabulary> vocabs_;
  std::vector<bool> aligned_mask_;
  ParallelConfig config_;
  IndexRange word_region_, char_region_;
  std::vector<LanguageFill> fill_;
};

// `languages` lists every language of the set including the pivot, in index
// order. Lexicons and monolingual vocabularies are keyed by language code;
// the pivot's monolingual vocabulary defaults to `pivot_vocab`.
// Throws MissingLexicon, MissingMonolingualVocab, CapExceededBySpecials.
ParallelVocabSet build_parallel_set(
    const Vocabulary& pivot_vocab, std::span<const LanguageSpec> languages,
    std::string_view pivot, const std::map<std::string, BilingualLexicon>& lexicons,
    const std::map<std::string, Vocabulary>& mono_vocabs,
    const ParallelConfig& config = {});

// Encodes with the vocabulary selected by the language tag. The tag itself
// is not emitted. Throws UnknownLanguageToken.
Encoding dispatch_encode(const ParallelVocabSet& set, std::string_view lang_token,
                         std::string_view text, const EncodeOptions& options = {});

struct AlignmentStats {
  std::size_t aligned = 0;
  std::size_t size = 0;
  double aligned_fraction = 0.0;
  std::map<std::string, LanguageFill> per_language_fill;
};

AlignmentStats alignment_stats(const ParallelVocabSet& set);

}  // namespace paratok

#endif  // PARATOK_PARALLEL_VOCAB_H_
