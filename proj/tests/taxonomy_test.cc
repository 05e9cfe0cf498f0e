#include "paratok/taxonomy.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "paratok/error.h"

namespace paratok {
namespace {

Vocabulary make_vocab(std::vector<std::string> extra) {
  std::vector<std::string> t = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  t.insert(t.end(), extra.begin(), extra.end());
  return Vocabulary(std::move(t));
}

TokenCategory cat(std::string_view token) {
  return classify_token(token, "##", default_language_tags());
}

TEST(ClassifyTest, Examples) {
  EXPECT_EQ(cat("##ing"), TokenCategory::kSubword);
  EXPECT_EQ(cat("##able"), TokenCategory::kSubword);
  EXPECT_EQ(cat("192"), TokenCategory::kNumber);
  EXPECT_EQ(cat("ple"), TokenCategory::kShortWord);
  EXPECT_EQ(cat("szo"), TokenCategory::kShortWord);
  EXPECT_EQ(cat("care"), TokenCategory::kWord);
  EXPECT_EQ(cat("drink"), TokenCategory::kWord);
}

TEST(ClassifyTest, Precedence) {
  EXPECT_EQ(cat("[CLS]"), TokenCategory::kSpecial);
  EXPECT_EQ(cat("[unused12]"), TokenCategory::kSpecial);
  EXPECT_EQ(cat("[HA]"), TokenCategory::kLanguageTag);
  EXPECT_EQ(cat("[XX]"), TokenCategory::kWord);
  EXPECT_EQ(cat("##12"), TokenCategory::kSubword);
  EXPECT_EQ(cat("123"), TokenCategory::kNumber);
  EXPECT_EQ(cat("2024"), TokenCategory::kNumber);
  EXPECT_EQ(cat("3rd"), TokenCategory::kShortWord);
  EXPECT_EQ(cat("33rd"), TokenCategory::kWord);
  EXPECT_EQ(cat("a"), TokenCategory::kShortWord);
}

TEST(ClassifyTest, ThreeDigitTokensAreNeverShortWords) {
  for (int n = 0; n < 1000; ++n) {
    char buf[4];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    EXPECT_EQ(cat(buf), TokenCategory::kNumber) << buf;
  }
}

TEST(ClassifyTest, LengthInCodePoints) {
  EXPECT_EQ(cat("ሰላም"), TokenCategory::kShortWord);   // 9 bytes, 3 code points
  EXPECT_EQ(cat("ƙasa"), TokenCategory::kWord);
  EXPECT_EQ(cat("ɗak"), TokenCategory::kShortWord);
}

TEST(ClassifyTest, CustomTagList) {
  const std::vector<std::string> tags = {"[EN]", "[XX]"};
  EXPECT_EQ(classify_token("[XX]", "##", tags), TokenCategory::kLanguageTag);
  EXPECT_EQ(classify_token("[HA]", "##", tags), TokenCategory::kWord);
}

TEST(ClassifyTest, NotInVocabulary) {
  const Vocabulary v = make_vocab({"care"});
  EXPECT_EQ(classify("care", v), TokenCategory::kWord);
  try {
    classify("drink", v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotInVocabulary);
  }
}

TEST(CategoryReportTest, QuarterEach) {
  const CategoryReport r = category_report(make_vocab({"a", "##a", "12", "abcd"}));
  for (auto c : {TokenCategory::kSubword, TokenCategory::kShortWord, TokenCategory::kNumber,
                 TokenCategory::kWord}) {
    EXPECT_EQ(r.count(c), 1u);
    EXPECT_DOUBLE_EQ(r.fraction(c), 0.25);
  }
  EXPECT_EQ(r.count(TokenCategory::kSpecial), 5u);
  EXPECT_FALSE(r.degenerate);
}

TEST(CategoryReportTest, DegenerateWhenOnlySpecials) {
  const CategoryReport r = category_report(make_vocab({"[HA]"}));
  EXPECT_TRUE(r.degenerate);
  for (double f : r.fractions) EXPECT_EQ(f, 0.0);
  EXPECT_EQ(r.count(TokenCategory::kLanguageTag), 1u);
}

TEST(CategoryReportTest, CharacterSlotsOverride) {
  const Vocabulary v = make_vocab({"a", "##a", "care"});
  const std::vector<bool> slots = {false, false, false, false, false, true, true, false};
  const CategoryReport r = category_report(v, default_language_tags(), slots);
  EXPECT_EQ(r.count(TokenCategory::kCharacter), 2u);
  EXPECT_EQ(r.count(TokenCategory::kWord), 1u);
  EXPECT_DOUBLE_EQ(r.fraction(TokenCategory::kWord), 1.0);
}

TEST(CategoryReportTest, PartitionAndFractionsSumToOne) {
  std::mt19937_64 rng(9);
  const std::string chars = "ab1#";
  for (int t = 0; t < 300; ++t) {
    std::set<std::string> uniq;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      std::string tok = rng() % 3 == 0 ? "##" : "";
      const int len = 1 + static_cast<int>(rng() % 6);
      for (int c = 0; c < len; ++c) tok += chars[rng() % chars.size()];
      uniq.insert(tok);
    }
    const Vocabulary v = make_vocab(std::vector<std::string>(uniq.begin(), uniq.end()));
    const CategoryReport r = category_report(v);
    std::size_t total = 0;
    for (std::size_t c : r.counts) total += c;
    EXPECT_EQ(total, v.size());
    double sum = 0.0;
    for (double f : r.fractions) sum += f;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(WordTokensTest, IdOrder) {
  const Vocabulary v = make_vocab({"rice", "##ing", "eat", "water", "1234", "[HA]"});
  EXPECT_EQ(word_tokens(v), (std::vector<std::string>{"rice", "water"}));
}

TEST(PlaceholderTest, Format) {
  EXPECT_EQ(placeholder_token(7), "[unused7]");
  EXPECT_TRUE(is_placeholder_token("[unused0]"));
  EXPECT_FALSE(is_placeholder_token("[unused]"));
  EXPECT_FALSE(is_placeholder_token("[unusedX]"));
}

}  // namespace
}  // namespace paratok
