#include "paratok/lexicon.h"
#include "paratok/taxonomy.h"

#include <gtest/gtest.h>

#include <mutex>
#include <set>
#include <thread>

#include "paratok/error.h"
#include "test_util.h"

namespace paratok {
namespace {

using utf8::Script;

Vocabulary make_vocab(std::vector<std::string> extra) {
  std::vector<std::string> t = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  t.insert(t.end(), extra.begin(), extra.end());
  return Vocabulary(std::move(t));
}

const ScriptProfile kLatin = {Script::kCommon, Script::kInherited, Script::kLatin};

TEST(AlignTest, EatCiAccepted) {
  MapProvider p;
  p.add_pair("en", "ha", "eat", "ci");
  const std::vector<std::string> words = {"eat"};
  const BilingualLexicon lex = align_word_tokens(words, p, "en", "ha");
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex.entries()[0], (LexiconEntry{"eat", "ci", "eat", LexiconStatus::kAccepted}));
}

TEST(AlignTest, ThreeEntryMockProvider) {
  MapProvider p;
  p.add_pair("en", "ha", "rice", "shinkafa");
  p.add("en", "ha", "run", "yin gudu");
  p.add("en", "ha", "bank", "banki");
  p.add("ha", "en", "banki", "shore");
  const std::vector<std::string> words = {"rice", "run", "bank", "music"};
  const BilingualLexicon lex = align_word_tokens(words, p, "en", "ha");
  EXPECT_EQ(lex.find("rice")->status, LexiconStatus::kAccepted);
  EXPECT_EQ(lex.find("run")->status, LexiconStatus::kRejectedMultiword);
  EXPECT_EQ(lex.find("bank")->status, LexiconStatus::kRejectedBacktranslation);
  EXPECT_EQ(lex.find("bank")->back, "shore");
  EXPECT_EQ(lex.find("music")->status, LexiconStatus::kMissing);
  EXPECT_EQ(lex.count(LexiconStatus::kAccepted), 1u);
  EXPECT_EQ(lex.size(), words.size());
}

TEST(AlignTest, MalformedTargets) {
  EXPECT_EQ(target_validity("ሰላም", kLatin), LexiconStatus::kRejectedMalformed);
  EXPECT_EQ(target_validity("ሰላም", {}), LexiconStatus::kAccepted);
  EXPECT_EQ(target_validity("ab\x07", kLatin), LexiconStatus::kRejectedMalformed);
  EXPECT_EQ(target_validity("ab\xFF", kLatin), LexiconStatus::kRejectedMalformed);
  EXPECT_EQ(target_validity("harshe[SEP]", kLatin), LexiconStatus::kRejectedMalformed);
  EXPECT_EQ(target_validity("##ing", kLatin), LexiconStatus::kRejectedMalformed);
  EXPECT_EQ(target_validity("a b", kLatin), LexiconStatus::kRejectedMultiword);
  EXPECT_EQ(target_validity("", kLatin), LexiconStatus::kMissing);
  EXPECT_EQ(target_validity("ƙasa", kLatin), LexiconStatus::kAccepted);
  EXPECT_EQ(target_validity("1990", kLatin), LexiconStatus::kAccepted);
}

TEST(AlignTest, UppercaseSpecialIsMalformedBeforeLowercasing) {
  MapProvider p;
  p.add("en", "ha", "language", "harshe[SEP]");
  p.add("ha", "en", "harshe[sep]", "language");
  const std::vector<std::string> words = {"language"};
  EXPECT_EQ(align_word_tokens(words, p, "en", "ha").entries()[0].status,
            LexiconStatus::kRejectedMalformed);
}

TEST(AlignTest, BacktranslationIsCaseFolded) {
  MapProvider p;
  p.add("en", "ha", "water", "Ruwa");
  p.add("ha", "en", "ruwa", "WATER");
  const std::vector<std::string> words = {"water"};
  const LexiconEntry e = align_word_tokens(words, p, "en", "ha").entries()[0];
  EXPECT_EQ(e.target, "ruwa");
  EXPECT_EQ(e.status, LexiconStatus::kAccepted);
  EXPECT_TRUE(backtranslation_matches("Water", "wATER"));
  EXPECT_FALSE(backtranslation_matches("water", ""));
}

TEST(AlignTest, ScriptProfileFromCorpus) {
  const std::vector<std::string> corpus = {"ina cin shinkafa 12."};
  const ScriptProfile profile = script_profile(corpus);
  EXPECT_EQ(profile, kLatin);
}

class ThrowingProvider : public TranslationProvider {
 public:
  std::optional<std::string> translate(std::string_view token, std::string_view,
                                       std::string_view) const override {
    if (token == "boom") throw std::runtime_error("backend down");
    return std::string(token) + "x";
  }
};

TEST(AlignTest, ProviderFailureNamesToken) {
  const std::vector<std::string> words = {"fine", "boom"};
  try {
    align_word_tokens(words, ThrowingProvider(), "en", "ha");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProviderFailure);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

// Records calling threads; declares itself serial.
class SerialProvider : public TranslationProvider {
 public:
  std::optional<std::string> translate(std::string_view token, std::string_view,
                                       std::string_view) const override {
    std::lock_guard<std::mutex> lock(mu_);
    threads_.insert(std::this_thread::get_id());
    return std::string(token);
  }
  std::size_t thread_count() const { return threads_.size(); }

 private:
  mutable std::mutex mu_;
  mutable std::set<std::thread::id> threads_;
};

std::vector<std::string> many_words(std::size_t n) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back("word" + std::to_string(i));
  return words;
}

TEST(AlignTest, SerialProviderIsCalledFromOneThread) {
  const SerialProvider p;
  const BilingualLexicon lex = align_word_tokens(many_words(10000), p, "en", "en");
  EXPECT_EQ(p.thread_count(), 1u);
  EXPECT_EQ(lex.count(LexiconStatus::kAccepted), 10000u);
}

TEST(AlignTest, ParallelAlignmentMatchesSerial) {
  MapProvider p;
  const std::vector<std::string> words = many_words(9000);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i % 3 == 0) p.add_pair("en", "ha", words[i], "t" + words[i]);
    if (i % 3 == 1) p.add("en", "ha", words[i], "t " + words[i]);
  }
  const BilingualLexicon parallel = align_word_tokens(words, p, "en", "ha");
  std::vector<LexiconEntry> serial;
  for (const std::string& w : words) {
    serial.push_back(align_word_tokens(std::vector<std::string>{w}, p, "en", "ha").entries()[0]);
  }
  EXPECT_EQ(parallel.entries(), serial);
}

TEST(AlignTest, FilterSoundnessAndIdempotence) {
  MapProvider p;
  p.add_pair("en", "ha", "rice", "shinkafa");
  p.add_pair("en", "ha", "peace", "ሰላም");
  p.add("en", "ha", "small", "karami");
  p.add("ha", "en", "karami", "little");
  p.add_pair("en", "ha", "house", "gida");
  const std::vector<std::string> words = {"rice", "peace", "small", "house", "story"};
  AlignOptions options;
  options.target_scripts = kLatin;
  const BilingualLexicon a = align_word_tokens(words, p, "en", "ha", options);
  EXPECT_EQ(a, align_word_tokens(words, p, "en", "ha", options));
  for (const LexiconEntry& e : a.entries()) {
    if (e.status != LexiconStatus::kAccepted) continue;
    EXPECT_EQ(target_validity(e.target, kLatin), LexiconStatus::kAccepted);
    EXPECT_TRUE(backtranslation_matches(e.source, e.back));
  }
  EXPECT_EQ(a.count(LexiconStatus::kAccepted), 2u);
  EXPECT_EQ(a.count(LexiconStatus::kRejectedMalformed), 1u);
}

TEST(LexiconTsvTest, RoundTripWithEscapes) {
  const BilingualLexicon lex(
      "en", "ha",
      {{"rice", "shinkafa", "rice", LexiconStatus::kAccepted},
       {"rain", "ruwan\tsama", "", LexiconStatus::kRejectedMultiword},
       {"odd", "a\\b\nc", "", LexiconStatus::kRejectedMultiword},
       {"music", "", "", LexiconStatus::kMissing}});
  testing::TempDir dir;
  lex.save(dir / "ha.tsv");
  EXPECT_EQ(BilingualLexicon::load(dir / "ha.tsv", "en", "ha"), lex);
  EXPECT_EQ(lex.to_tsv().substr(0, 28), "rice\tshinkafa\trice\tAccepted\n");
}

TEST(LexiconTsvTest, UnknownStatus) {
  try {
    BilingualLexicon::parse_tsv("a\tb\tc\tMaybe\n", "en", "ha");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidFormat);
  }
}

TEST(TsvProviderTest, ParsesDictionary) {
  const TsvProvider p = TsvProvider::parse(
      "# comment\nen\tha\trice\tshinkafa\n\nha\ten\tshinkafa\trice\n");
  EXPECT_EQ(p.translate("rice", "en", "ha"), "shinkafa");
  EXPECT_EQ(p.translate("shinkafa", "ha", "en"), "rice");
  EXPECT_EQ(p.translate("rice", "en", "yo"), std::nullopt);
  try {
    TsvProvider::parse("en\tha\trice\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidFormat);
  }
}

TEST(CoverageTest, DirectCount) {
  // Word tokens: rice, water, house. Non-special: those plus "##s" -> 4.
  const Vocabulary v = make_vocab({"rice", "water", "house", "##s"});
  const BilingualLexicon lex("en", "ha",
                             {{"rice", "shinkafa", "rice", LexiconStatus::kAccepted},
                              {"water", "ruwa", "water", LexiconStatus::kAccepted},
                              {"house", "", "", LexiconStatus::kMissing}});
  const AlignmentCoverage c = alignment_coverage(lex, v, default_language_tags());
  EXPECT_EQ(c.accepted, 2u);
  EXPECT_EQ(c.word_tokens, 3u);
  EXPECT_EQ(c.non_special, 4u);
  EXPECT_NEAR(c.word_type_fraction, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.total_fraction, 0.5, 1e-12);
}

TEST(CoverageTest, AllAccepted) {
  const Vocabulary v = make_vocab({"rice", "water", "##s", "ab", "[HA]"});
  const BilingualLexicon lex("en", "ha",
                             {{"rice", "shinkafa", "rice", LexiconStatus::kAccepted},
                              {"water", "ruwa", "water", LexiconStatus::kAccepted}});
  const AlignmentCoverage c = alignment_coverage(lex, v, default_language_tags());
  EXPECT_DOUBLE_EQ(c.word_type_fraction, 1.0);
  EXPECT_DOUBLE_EQ(c.total_fraction, 2.0 / 4.0);
}

}  // namespace
}  // namespace paratok
