#include "paratok/embedding.h"

#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "paratok/error.h"
#include "test_util.h"

namespace paratok {
namespace {

Vocabulary make_vocab(std::vector<std::string> extra) {
  std::vector<std::string> t = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  t.insert(t.end(), extra.begin(), extra.end());
  return Vocabulary(std::move(t));
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kValidation;
}

Encoding make_encoding(std::vector<TokenId> ids, std::size_t lang = 0) {
  Encoding e;
  e.ids = std::move(ids);
  e.attention_mask.assign(e.ids.size(), 1);
  e.type_ids.assign(e.ids.size(), 0);
  e.language_id = lang;
  return e;
}

EmbeddingTables zero_like(const EmbeddingTables& t) {
  EmbeddingTables z = t;
  z.token.setZero();
  z.segment.setZero();
  z.position.setZero();
  z.language.setZero();
  return z;
}

TEST(InitTablesTest, DeterministicAndSeedAddressable) {
  const TableSizes sizes{50, 2, 16, 3};
  const EmbeddingTables a = init_tables(sizes, 8, 1);
  const EmbeddingTables b = init_tables(sizes, 8, 1);
  const EmbeddingTables c = init_tables(sizes, 8, 2);
  EXPECT_TRUE(a.token == b.token && a.segment == b.segment && a.position == b.position &&
              a.language == b.language);
  EXPECT_FALSE(a.token == c.token);
  EXPECT_EQ(a.token.rows(), 50);
  EXPECT_EQ(a.segment.rows(), 2);
  EXPECT_EQ(a.position.rows(), 16);
  EXPECT_EQ(a.language.rows(), 3);
  EXPECT_EQ(a.token.cols(), 8);
}

TEST(InitTablesTest, ZeroDimension) {
  EXPECT_EQ(kind_of([] { init_tables({10, 2, 4, 1}, 0, 1); }), ErrorKind::kZeroDimension);
}

TEST(InitTablesTest, ScaledToInitStd) {
  const EmbeddingTables t = init_tables({5000, 2, 4, 1}, 40, 123);
  const double n = static_cast<double>(t.token.size());
  const double mean = t.token.sum() / n;
  const double var = (t.token.array() - mean).square().sum() / (n - 1);
  EXPECT_NEAR(mean, 0.0, 0.001);
  EXPECT_NEAR(std::sqrt(var), kInitStd, 0.0005);
}

TEST(ComposeTest, ZeroTablesExceptTokenGiveTokenRow) {
  EmbeddingTables t = zero_like(init_tables({10, 2, 8, 2}, 4, 3));
  t.token = init_tables({10, 2, 8, 2}, 4, 3).token;
  const ComposedInput out = compose(t, make_encoding({7}), ComposeVariant::kAddToAll);
  ASSERT_EQ(out.rows.rows(), 1);
  EXPECT_TRUE(out.rows.row(0) == t.token.row(7));
}

TEST(ComposeTest, FourTermSumOracle) {
  const EmbeddingTables t = init_tables({10, 2, 8, 3}, 5, 9);
  Encoding e = make_encoding({2, 6, 3}, 2);
  e.type_ids = {0, 1, 0};
  const ComposedInput out = compose(t, e, ComposeVariant::kAddToAll);
  ASSERT_EQ(out.rows.rows(), 3);
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 5; ++c) {
      const double expected = t.token(e.ids[i], c) + t.segment(e.type_ids[i], c) +
                              t.position(i, c) + t.language(2, c);
      EXPECT_NEAR(out.rows(i, c), expected, 1e-15);
    }
  }
}

TEST(ComposeTest, UnalignedOnlyWithAllFalseMaskEqualsAddToAll) {
  const EmbeddingTables t = init_tables({10, 2, 8, 2}, 4, 5);
  const Encoding e = make_encoding({2, 5, 9, 3}, 1);
  const std::vector<bool> mask(10, false);
  EXPECT_TRUE(compose(t, e, ComposeVariant::kAddToAll).rows ==
              compose(t, e, ComposeVariant::kAddToUnalignedOnly, mask).rows);
  EXPECT_TRUE(compose(t, e, ComposeVariant::kAddToAll).rows ==
              compose(t, e, ComposeVariant::kAddToUnalignedOnly).rows);
}

TEST(ComposeTest, UnalignedOnlySkipsAlignedIds) {
  const EmbeddingTables t = init_tables({10, 2, 8, 2}, 4, 5);
  const Encoding e = make_encoding({2, 5, 3}, 1);
  std::vector<bool> mask(10, false);
  mask[5] = true;
  const Matrix out = compose(t, e, ComposeVariant::kAddToUnalignedOnly, mask).rows;
  EXPECT_TRUE(out.row(1) == (t.token.row(5) + t.segment.row(0) + t.position.row(1)));
  EXPECT_TRUE(out.row(0) ==
              (t.token.row(2) + t.segment.row(0) + t.position.row(0) + t.language.row(1)));
}

TEST(ComposeTest, PrependLangTokenLayout) {
  const EmbeddingTables t = init_tables({10, 2, 8, 2}, 4, 5);
  const Encoding e = make_encoding({2, 5, 3}, 1);
  const ComposedInput out = compose(t, e, ComposeVariant::kPrependLangToken);
  ASSERT_EQ(out.rows.rows(), 4);
  EXPECT_TRUE(out.rows.row(0) ==
              (t.language.row(1) + t.segment.row(0) + t.position.row(0)));
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(out.rows.row(i + 1) ==
                (t.token.row(e.ids[i]) + t.segment.row(0) + t.position.row(i + 1)));
  }
}

TEST(ComposeTest, Errors) {
  const EmbeddingTables t = init_tables({10, 2, 3, 2}, 4, 5);
  EXPECT_EQ(kind_of([&] { compose(t, make_encoding({1, 2, 3, 4}), ComposeVariant::kAddToAll); }),
            ErrorKind::kPositionOverflow);
  EXPECT_EQ(kind_of([&] {
              compose(t, make_encoding({1, 2, 3}), ComposeVariant::kPrependLangToken);
            }),
            ErrorKind::kPositionOverflow);
  EXPECT_EQ(kind_of([&] { compose(t, make_encoding({10}), ComposeVariant::kAddToAll); }),
            ErrorKind::kIdOutOfRange);
  EXPECT_EQ(kind_of([&] { compose(t, make_encoding({1}, 2), ComposeVariant::kAddToAll); }),
            ErrorKind::kIdOutOfRange);
  EXPECT_EQ(kind_of([&] {
              compose(t, make_encoding({1}), ComposeVariant::kAddToUnalignedOnly,
                      std::vector<bool>(3, false));
            }),
            ErrorKind::kDimensionMismatch);
}

TEST(ComposeTest, Linearity) {
  EmbeddingTables t = zero_like(init_tables({10, 2, 8, 2}, 4, 5));
  t.token = init_tables({10, 2, 8, 2}, 4, 6).token;
  const Encoding e = make_encoding({2, 5, 9, 3});
  EmbeddingTables scaled = t;
  scaled.token *= 3.5;
  for (auto v : {ComposeVariant::kAddToAll, ComposeVariant::kPrependLangToken,
                 ComposeVariant::kAddToUnalignedOnly}) {
    const Matrix a = compose(t, e, v).rows;
    const Matrix b = compose(scaled, e, v).rows;
    EXPECT_LE((b - 3.5 * a).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ComposeTest, BroadcastSubtraction) {
  const EmbeddingTables t = init_tables({20, 2, 16, 3}, 6, 8);
  EmbeddingTables no_lang = t;
  no_lang.language.setZero();
  const Encoding e = make_encoding({2, 7, 11, 19, 3}, 2);
  Matrix out = compose(t, e, ComposeVariant::kAddToAll).rows;
  out.rowwise() -= t.language.row(2);
  EXPECT_LE((out - compose(no_lang, e, ComposeVariant::kAddToAll).rows).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(VariantTest, Names) {
  for (auto v : {ComposeVariant::kAddToAll, ComposeVariant::kPrependLangToken,
                 ComposeVariant::kAddToUnalignedOnly}) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
  EXPECT_EQ(kind_of([] { parse_variant("sideways"); }), ErrorKind::kInvalidArgument);
}

// Old vocabulary: specials, a, b, c, ##a, ##b, ##c, ab.
class CptTest : public ::testing::Test {
 protected:
  CptTest()
      : old_vocab_(make_vocab({"a", "b", "c", "##a", "##b", "##c", "ab"})),
        old_table_(old_vocab_.size(), 3) {
    for (Eigen::Index r = 0; r < old_table_.rows(); ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) old_table_(r, c) = 10.0 * r + c;
    }
  }
  int id(std::string_view t) const { return *old_vocab_.find(t); }

  Vocabulary old_vocab_;
  Matrix old_table_;
};

ParallelVocabSet set_of(std::vector<std::string> en, std::vector<std::string> ha) {
  std::vector<std::string> base = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "[EN]", "[HA]"};
  std::vector<std::string> a = base, b = base;
  a.insert(a.end(), en.begin(), en.end());
  b.insert(b.end(), ha.begin(), ha.end());
  const std::size_t n = a.size();
  return ParallelVocabSet({{"en", "[EN]"}, {"ha", "[HA]"}}, "en",
                          {Vocabulary(a), Vocabulary(b)}, std::vector<bool>(n, false),
                          ParallelConfig{}, IndexRange{7, n}, IndexRange{n, n},
                          {LanguageFill{}, LanguageFill{}});
}

TEST_F(CptTest, VerbatimTokenCopied) {
  const ParallelVocabSet set = set_of({"ab"}, {"c"});
  const Matrix out = cpt_init_new_embeddings(old_vocab_, old_table_, set, CptMode::kSingleLang, 0);
  EXPECT_TRUE(out.row(7) == old_table_.row(id("ab")));
}

TEST_F(CptTest, HandAverage) {
  EXPECT_EQ(cpt_constituents(old_vocab_, "abc"),
            (std::vector<TokenId>{id("ab"), id("##c")}));
  EXPECT_EQ(cpt_constituents(old_vocab_, "bca"),
            (std::vector<TokenId>{id("b"), id("##c"), id("##a")}));
  const ParallelVocabSet set2 = set_of({"bca"}, {"x"});
  const Matrix out =
      cpt_init_new_embeddings(old_vocab_, old_table_, set2, CptMode::kSingleLang, 0);
  const Eigen::RowVectorXd expected =
      (old_table_.row(id("b")) + old_table_.row(id("##c")) + old_table_.row(id("##a"))) / 3.0;
  EXPECT_LE((out.row(7) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(CptTest, UnsegmentableFallsBackToUnk) {
  const ParallelVocabSet set = set_of({"xyz"}, {"a"});
  const Matrix out = cpt_init_new_embeddings(old_vocab_, old_table_, set, CptMode::kSingleLang, 0);
  EXPECT_TRUE(out.row(7) == old_table_.row(old_vocab_.unk_id()));
}

TEST_F(CptTest, ParallelMidpoint) {
  const ParallelVocabSet set = set_of({"a"}, {"b"});
  const Matrix out =
      cpt_init_new_embeddings(old_vocab_, old_table_, set, CptMode::kParallelAllLangs);
  const Eigen::RowVectorXd mid = (old_table_.row(id("a")) + old_table_.row(id("b"))) / 2.0;
  EXPECT_LE((out.row(7) - mid).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(CptTest, ContinuationSurfaceSegmentsAsContinuation) {
  EXPECT_EQ(cpt_constituents(old_vocab_, "##ca"), (std::vector<TokenId>{id("##c"), id("##a")}));
}

TEST_F(CptTest, DimensionMismatch) {
  const ParallelVocabSet set = set_of({"a"}, {"b"});
  const Matrix short_table = old_table_.topRows(3);
  EXPECT_EQ(kind_of([&] {
              cpt_init_new_embeddings(old_vocab_, short_table, set, CptMode::kSingleLang);
            }),
            ErrorKind::kDimensionMismatch);
}

TEST(TensorFileTest, RoundTripFloat32) {
  testing::TempDir dir;
  const EmbeddingTables t = init_tables({12, 2, 6, 2}, 5, 77);
  save_tables(dir / "t.bin", t, ComposeVariant::kPrependLangToken);
  const EmbeddingTables back = load_tables(dir / "t.bin");
  EXPECT_EQ(back.dim, 5u);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_TRUE(back.token == t.token.cast<float>().cast<double>());
  EXPECT_TRUE(back.language == t.language.cast<float>().cast<double>());
  const TensorFile f = load_tensors(dir / "t.bin");
  EXPECT_EQ(f.meta.at("variant"), "prepend-lang-token");
  EXPECT_EQ(f.meta.at("vocab_size"), 12);
  EXPECT_EQ(f.meta.at("d"), 5);
  const std::string bytes = testing::read_text(dir / "t.bin");
  const std::size_t header = bytes.find('\n') + 1;
  EXPECT_EQ(bytes.size() - header, 4u * 5u * (12 + 2 + 6 + 2));
}

TEST(TensorFileTest, Errors) {
  testing::TempDir dir;
  EXPECT_EQ(kind_of([&] { load_tensors(dir / "missing.bin"); }), ErrorKind::kFileNotFound);
  save_tables(dir / "t.bin", init_tables({4, 2, 2, 1}, 2, 1));
  std::string bytes = testing::read_text(dir / "t.bin");
  testing::write_text(dir / "cut.bin", bytes.substr(0, bytes.size() - 3));
  EXPECT_EQ(kind_of([&] { load_tensors(dir / "cut.bin"); }), ErrorKind::kInvalidFormat);
  testing::write_text(dir / "junk.bin", "not a tensor file\n");
  EXPECT_EQ(kind_of([&] { load_tensors(dir / "junk.bin"); }), ErrorKind::kInvalidFormat);
}

}  // namespace
}  // namespace paratok
