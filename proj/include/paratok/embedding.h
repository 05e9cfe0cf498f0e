#ifndef PARATOK_EMBEDDING_H_
#define PARATOK_EMBEDDING_H_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paratok/parallel_vocab.h"
#include "paratok/vocabulary.h"
#include "paratok/wordpiece.h"

namespace paratok {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::size_t kDefaultEmbeddingDim = 64;
inline constexpr std::size_t kDefaultMaxLen = 128;
inline constexpr double kInitStd = 0.02;

struct TableSizes {
  std::size_t vocab_size = 0;
  std::size_t num_segments = 2;
  std::size_t max_len = kDefaultMaxLen;
  std::size_t num_languages = 1;
};

struct EmbeddingTables {
  Matrix token;
  Matrix segment;
  Matrix position;
  Matrix language;
  std::size_t dim = 0;
  std::uint64_t seed = 0;

  TableSizes sizes() const {
    return {static_cast<std::size_t>(token.rows()),
            static_cast<std::size_t>(segment.rows()),
            static_cast<std::size_t>(position.rows()),
            static_cast<std::size_t>(language.rows())};
  }
};

// N(0, 0.02^2) entries from a seeded mt19937_64 via Box-Muller, filled in
// table order token, segment, position, language. Throws ZeroDimension.
EmbeddingTables init_tables(const TableSizes& sizes, std::size_t dim,
                            std::uint64_t seed);

enum class ComposeVariant {
  kPrependLangToken,
  kAddToAll,
  kAddToUnalignedOnly,
};

std::string_view variant_name(ComposeVariant variant);
// Accepts "prepend-lang-token", "add-to-all", "add-to-unaligned-only".
ComposeVariant parse_variant(std::string_view name);

struct ComposedInput {
  Matrix rows;
  ComposeVariant variant = ComposeVariant::kAddToAll;
};

// Sums token, segment, position and language rows per position.
//   AddToAll: every row receives the language row.
//   PrependLangToken: row 0 is language + segment[0] + position[0]; input
//     token i lands at row i + 1 with position i + 1 and no language term.
//   AddToUnalignedOnly: the language row is added only where
//     aligned_mask[id] is false; `aligned_mask` must cover the vocabulary.
// Throws PositionOverflow, IdOutOfRange.
ComposedInput compose(const EmbeddingTables& tables, const Encoding& enc,
                      ComposeVariant variant,
                      const std::vector<bool>& aligned_mask = {});

enum class CptMode { kSingleLang, kParallelAllLangs };

// Initializes a new token table from an old one by averaging the rows of
// each new token's segmentation under the old vocabulary. SingleLang
// segments the surface forms of `language`; ParallelAllLangs averages the
// per-language means over every language at that index. Unsegmentable
// surfaces fall back to the old UNK row. Throws DimensionMismatch.
Matrix cpt_init_new_embeddings(const Vocabulary& old_vocab, const Matrix& old_table,
                               const ParallelVocabSet& new_set, CptMode mode,
                               std::size_t language = 0);

// Old-vocabulary rows whose mean initializes `surface`.
std::vector<TokenId> cpt_constituents(const Vocabulary& old_vocab,
                                      std::string_view surface);

// Binary tensor file: one JSON header line, then the named matrices as
// little-endian float32 in row-major order.
struct NamedMatrix {
  std::string name;
  Matrix values;
};

struct TensorFile {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedMatrix> tensors;

  // Throws InvalidFormat if absent.
  const Matrix& get(std::string_view name) const;
};

void save_tensors(const std::filesystem::path& path, const TensorFile& file);
// Throws FileNotFound, InvalidFormat.
TensorFile load_tensors(const std::filesystem::path& path);

void save_tables(const std::filesystem::path& path, const EmbeddingTables& tables,
                 ComposeVariant variant = ComposeVariant::kAddToAll);
EmbeddingTables load_tables(const std::filesystem::path& path);

}  // namespace paratok

#endif  // PARATOK_EMBEDDING_H_
