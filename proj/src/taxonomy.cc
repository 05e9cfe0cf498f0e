#include "paratok/taxonomy.h"

#include <algorithm>

#include "paratok/error.h"
#include "paratok/utf8.h"

namespace paratok {

std::string_view category_name(TokenCategory category) {
  switch (category) {
    case TokenCategory::kSubword: return "subword";
    case TokenCategory::kShortWord: return "short_word";
    case TokenCategory::kNumber: return "number";
    case TokenCategory::kWord: return "word";
    case TokenCategory::kSpecial: return "special";
    case TokenCategory::kLanguageTag: return "language_tag";
    case TokenCategory::kCharacter: return "character";
  }
  return "unknown";
}

const std::vector<std::string>& default_language_tags() {
  static const std::vector<std::string> kTags = {
      "[EN]", "[AC]", "[AM]", "[BA]", "[HA]", "[IG]", "[JV]",
      "[RW]", "[MI]", "[OR]", "[SU]", "[SW]", "[TI]", "[TW]"};
  return kTags;
}

std::string placeholder_token(std::size_t n) {
  return "[unused" + std::to_string(n) + "]";
}

bool is_placeholder_token(std::string_view token) {
  constexpr std::string_view kHead = "[unused";
  if (token.size() <= kHead.size() + 1 || token.substr(0, kHead.size()) != kHead ||
      token.back() != ']') {
    return false;
  }
  const std::string_view digits =
      token.substr(kHead.size(), token.size() - kHead.size() - 1);
  return std::all_of(digits.begin(), digits.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

TokenCategory classify_token(std::string_view token,
                             std::string_view continuation_prefix,
                             std::span<const std::string> language_tags) {
  if (is_special_token(token) || is_placeholder_token(token)) {
    return TokenCategory::kSpecial;
  }
  if (token.size() == 4 && token.front() == '[' && token.back() == ']' &&
      std::find(language_tags.begin(), language_tags.end(), token) !=
          language_tags.end()) {
    return TokenCategory::kLanguageTag;
  }
  if (!continuation_prefix.empty() && token.size() > continuation_prefix.size() &&
      token.substr(0, continuation_prefix.size()) == continuation_prefix) {
    return TokenCategory::kSubword;
  }
  const std::u32string cps = utf8::to_u32(token);
  if (!cps.empty() && std::all_of(cps.begin(), cps.end(), utf8::is_decimal_digit)) {
    return TokenCategory::kNumber;
  }
  if (cps.size() < 4) return TokenCategory::kShortWord;
  return TokenCategory::kWord;
}

TokenCategory classify(std::string_view token, const Vocabulary& vocab,
                       std::span<const std::string> language_tags) {
  if (!vocab.contains(token)) {
    throw Error(ErrorKind::kNotInVocabulary, std::string(token));
  }
  return classify_token(token, vocab.continuation_prefix(), language_tags);
}

double CategoryReport::fraction(TokenCategory c) const {
  const auto i = static_cast<std::size_t>(c);
  return i < kNumCoreCategories ? fractions[i] : 0.0;
}

CategoryReport category_report(const Vocabulary& vocab,
                               std::span<const std::string> language_tags,
                               const std::vector<bool>& character_slots) {
  CategoryReport report;
  const auto& tokens = vocab.tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    TokenCategory c =
        classify_token(tokens[i], vocab.continuation_prefix(), language_tags);
    if (i < character_slots.size() && character_slots[i]) {
      c = TokenCategory::kCharacter;
    }
    ++report.counts[static_cast<std::size_t>(c)];
  }
  std::size_t core = 0;
  for (std::size_t i = 0; i < kNumCoreCategories; ++i) core += report.counts[i];
  report.degenerate = core == 0;
  if (!report.degenerate) {
    for (std::size_t i = 0; i < kNumCoreCategories; ++i) {
      report.fractions[i] =
          static_cast<double>(report.counts[i]) / static_cast<double>(core);
    }
  }
  return report;
}

std::vector<std::string> word_tokens(const Vocabulary& vocab,
                                     std::span<const std::string> language_tags) {
  std::vector<std::string> out;
  for (const std::string& t : vocab.tokens()) {
    if (classify_token(t, vocab.continuation_prefix(), language_tags) ==
        TokenCategory::kWord) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace paratok
