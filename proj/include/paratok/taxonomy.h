#ifndef PARATOK_TAXONOMY_H_
#define PARATOK_TAXONOMY_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paratok/vocabulary.h"

namespace paratok {

// The first four are the categories vocabulary proportions are reported
// over; the rest are bookkeeping refinements.
enum class TokenCategory {
  kSubword = 0,
  kShortWord,
  kNumber,
  kWord,
  kSpecial,
  kLanguageTag,
  kCharacter,
};
inline constexpr std::size_t kNumCategories = 7;
inline constexpr std::size_t kNumCoreCategories = 4;

std::string_view category_name(TokenCategory category);

// Language identity tokens used by default: one bracketed code per
// supported language, English first.
const std::vector<std::string>& default_language_tags();

// "[unused<n>]" slots emitted when a vocabulary runs out of filler.
std::string placeholder_token(std::size_t n);
bool is_placeholder_token(std::string_view token);

// Precedence: Special > LanguageTag > Subword > Number > ShortWord > Word.
// Length is measured in code points; ShortWord means fewer than four.
TokenCategory classify_token(std::string_view token,
                             std::string_view continuation_prefix,
                             std::span<const std::string> language_tags);

// Throws NotInVocabulary.
TokenCategory classify(std::string_view token, const Vocabulary& vocab,
                       std::span<const std::string> language_tags =
                           default_language_tags());

struct CategoryReport {
  std::array<std::size_t, kNumCategories> counts{};
  // Fractions over the four core categories only.
  std::array<double, kNumCoreCategories> fractions{};
  bool degenerate = false;

  std::size_t count(TokenCategory c) const {
    return counts[static_cast<std::size_t>(c)];
  }
  double fraction(TokenCategory c) const;
};

// `character_slots`, when non-empty, flags ids counted as Character instead
// of their lexical category.
CategoryReport category_report(const Vocabulary& vocab,
                               std::span<const std::string> language_tags =
                                   default_language_tags(),
                               const std::vector<bool>& character_slots = {});

// Tokens of `vocab` classified as Word, in id order.
std::vector<std::string> word_tokens(const Vocabulary& vocab,
                                     std::span<const std::string> language_tags =
                                         default_language_tags());

}  // namespace paratok

#endif  // PARATOK_TAXONOMY_H_
