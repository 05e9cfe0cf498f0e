#ifndef PARATOK_METRICS_H_
#define PARATOK_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paratok/embedding.h"
#include "paratok/parallel_vocab.h"
#include "paratok/vocabulary.h"
#include "paratok/wordpiece.h"

namespace paratok {

// Anything that can encode a sentence of a given language.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual Encoding encode(std::string_view lang, std::string_view text) const = 0;
  virtual TokenId unk_id(std::string_view lang) const = 0;
};

// One vocabulary for every language.
class SharedTokenizer : public Tokenizer {
 public:
  explicit SharedTokenizer(const Vocabulary& vocab, EncodeOptions options = {})
      : vocab_(vocab), options_(options) {}
  Encoding encode(std::string_view lang, std::string_view text) const override;
  TokenId unk_id(std::string_view) const override { return vocab_.unk_id(); }

 private:
  const Vocabulary& vocab_;
  EncodeOptions options_;
};

// Dispatches on language code. Throws UnknownLanguageToken.
class ParallelTokenizer : public Tokenizer {
 public:
  explicit ParallelTokenizer(const ParallelVocabSet& set, EncodeOptions options = {})
      : set_(set), options_(options) {}
  Encoding encode(std::string_view lang, std::string_view text) const override;
  TokenId unk_id(std::string_view lang) const override;

 private:
  std::size_t index_of(std::string_view lang) const;
  const ParallelVocabSet& set_;
  EncodeOptions options_;
};

// Rows of mutually parallel sentences, one column per language.
class ParallelCorpus {
 public:
  ParallelCorpus(std::vector<std::string> languages,
                 std::vector<std::vector<std::string>> rows);

  const std::vector<std::string>& languages() const { return languages_; }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  // Throws InvalidArgument for an unknown language.
  std::vector<std::string> column(std::string_view lang) const;
  bool has_language(std::string_view lang) const;

  // Header row of language codes, then one tab-separated row per sentence.
  static ParallelCorpus parse_tsv(std::string_view contents);
  static ParallelCorpus load_tsv(const std::filesystem::path& path);

 private:
  std::vector<std::string> languages_;
  std::vector<std::vector<std::string>> rows_;
};

struct FertilityResult {
  std::size_t tokens = 0;  // non-special ids
  std::size_t words = 0;
  std::size_t unk_words = 0;  // words encoded as a lone UNK
  double value = 0.0;
  // More than half the words are pure UNK.
  bool not_applicable = false;
};

// Throws NoWords.
FertilityResult fertility(const Tokenizer& tokenizer, std::string_view lang,
                          std::span<const std::string> sentences);

enum class ParityMode {
  kMeanSentenceRatio,  // mean over rows of max(c_l, c_r) / min(c_l, c_r)
  kCorpusRatio,        // max(sum c_l, sum c_r) / min(sum c_l, sum c_r)
};

struct ParityResult {
  double value = 0.0;
  std::size_t rows = 0;
  std::size_t lang_tokens = 0;
  std::size_t reference_tokens = 0;
};

// Throws ZeroTokenSentence, InvalidArgument.
ParityResult parity(const Tokenizer& tokenizer, const ParallelCorpus& corpus,
                    std::string_view lang, std::string_view reference,
                    ParityMode mode = ParityMode::kMeanSentenceRatio);

std::size_t unk_count(const Tokenizer& tokenizer, std::string_view lang,
                      std::span<const std::string> sentences);

struct XsimResult {
  double error_rate = 0.0;         // percent
  std::vector<std::size_t> retrieved;  // argmax target row per source row
  std::size_t k = 0;               // neighbourhood size actually used
};

// Margin-ratio bitext retrieval error. k is clamped to n - 1.
// Throws DegenerateZeroVector, DimensionMismatch, InvalidArgument.
XsimResult xsim(const Matrix& src, const Matrix& tgt, std::size_t k = 4);
double xsim_error_rate(const Matrix& src, const Matrix& tgt, std::size_t k = 4);

struct PcaResult {
  Matrix coords;                       // n x out_dims
  Matrix components;                   // out_dims x d, unit rows
  std::vector<double> eigenvalues;     // descending, sample covariance
  std::vector<double> explained_ratio; // eigenvalue / total variance
  bool rank_deficient = false;         // trailing dims zero-filled
};

// Throws InvalidArgument when n < 2 or out_dims > min(n, d).
PcaResult pca_project(const Matrix& points, std::size_t out_dims = 2);

}  // namespace paratok

#endif  // PARATOK_METRICS_H_
