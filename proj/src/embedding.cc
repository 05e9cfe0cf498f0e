#include "paratok/embedding.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>

#include "paratok/error.h"

namespace paratok {

using json = nlohmann::json;

namespace {

// Standard normal stream over mt19937_64; only the integer engine is
// relied upon, so the sequence is identical on every conforming library.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  // Uniform on (0, 1].
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

void fill_gaussian(Matrix& m, GaussianStream& stream) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = kInitStd * stream.next();
  }
}

}  // namespace

EmbeddingTables init_tables(const TableSizes& sizes, std::size_t dim,
                            std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorKind::kZeroDimension, "embedding width must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  EmbeddingTables t;
  t.dim = dim;
  t.seed = seed;
  t.token.resize(static_cast<Eigen::Index>(sizes.vocab_size), d);
  t.segment.resize(static_cast<Eigen::Index>(sizes.num_segments), d);
  t.position.resize(static_cast<Eigen::Index>(sizes.max_len), d);
  t.language.resize(static_cast<Eigen::Index>(sizes.num_languages), d);
  GaussianStream stream(seed);
  fill_gaussian(t.token, stream);
  fill_gaussian(t.segment, stream);
  fill_gaussian(t.position, stream);
  fill_gaussian(t.language, stream);
  return t;
}

std::string_view variant_name(ComposeVariant variant) {
  switch (variant) {
    case ComposeVariant::kPrependLangToken: return "prepend-lang-token";
    case ComposeVariant::kAddToAll: return "add-to-all";
    case ComposeVariant::kAddToUnalignedOnly: return "add-to-unaligned-only";
  }
  return "add-to-all";
}

ComposeVariant parse_variant(std::string_view name) {
  for (auto v : {ComposeVariant::kPrependLangToken, ComposeVariant::kAddToAll,
                 ComposeVariant::kAddToUnalignedOnly}) {
    if (variant_name(v) == name) return v;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown compose variant '" + std::string(name) + "'");
}

ComposedInput compose(const EmbeddingTables& tables, const Encoding& enc,
                      ComposeVariant variant, const std::vector<bool>& aligned_mask) {
  const std::size_t m = enc.ids.size();
  const std::size_t offset = variant == ComposeVariant::kPrependLangToken ? 1 : 0;
  const std::size_t rows = m + offset;
  if (rows > static_cast<std::size_t>(tables.position.rows())) {
    throw Error(ErrorKind::kPositionOverflow,
                std::to_string(rows) + " positions exceed max_len " +
                    std::to_string(tables.position.rows()));
  }
  if (enc.language_id >= static_cast<std::size_t>(tables.language.rows())) {
    throw Error(ErrorKind::kIdOutOfRange,
                "language id " + std::to_string(enc.language_id));
  }
  if (enc.type_ids.size() != m) {
    throw Error(ErrorKind::kDimensionMismatch, "type_ids length differs from ids");
  }
  if (variant == ComposeVariant::kAddToUnalignedOnly && !aligned_mask.empty() &&
      aligned_mask.size() != static_cast<std::size_t>(tables.token.rows())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "aligned mask does not cover the token table");
  }

  ComposedInput out;
  out.variant = variant;
  out.rows.resize(static_cast<Eigen::Index>(rows), tables.token.cols());
  const auto lang = tables.language.row(static_cast<Eigen::Index>(enc.language_id));
  if (offset) {
    out.rows.row(0) = lang + tables.segment.row(0) + tables.position.row(0);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const TokenId id = enc.ids[i];
    if (id < 0 || id >= tables.token.rows()) {
      throw Error(ErrorKind::kIdOutOfRange, "token id " + std::to_string(id));
    }
    if (enc.type_ids[i] >= tables.segment.rows()) {
      throw Error(ErrorKind::kIdOutOfRange,
                  "segment id " + std::to_string(enc.type_ids[i]));
    }
    const auto r = static_cast<Eigen::Index>(i + offset);
    out.rows.row(r) = tables.token.row(id) + tables.segment.row(enc.type_ids[i]) +
                      tables.position.row(r);
    bool add_language = variant == ComposeVariant::kAddToAll;
    if (variant == ComposeVariant::kAddToUnalignedOnly) {
      add_language = aligned_mask.empty() || !aligned_mask[static_cast<std::size_t>(id)];
    }
    if (add_language) out.rows.row(r) += lang;
  }
  return out;
}

std::vector<TokenId> cpt_constituents(const Vocabulary& old_vocab,
                                      std::string_view surface) {
  if (auto id = old_vocab.find(surface)) return {*id};
  std::optional<std::vector<TokenId>> pieces;
  if (old_vocab.is_continuation(surface)) {
    pieces = segment_word(old_vocab, surface.substr(old_vocab.continuation_prefix().size()),
                          /*as_continuation=*/true);
  } else {
    pieces = segment_word(old_vocab, surface);
  }
  if (!pieces || pieces->empty()) return {old_vocab.unk_id()};
  return *pieces;
}

namespace {

Eigen::RowVectorXd mean_of(const Matrix& table, const std::vector<TokenId>& ids) {
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(table.cols());
  for (TokenId id : ids) sum += table.row(id);
  return sum / static_cast<double>(ids.size());
}

}  // namespace

Matrix cpt_init_new_embeddings(const Vocabulary& old_vocab, const Matrix& old_table,
                               const ParallelVocabSet& new_set, CptMode mode,
                               std::size_t language) {
  if (static_cast<std::size_t>(old_table.rows()) != old_vocab.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "old table has " + std::to_string(old_table.rows()) +
                    " rows for a vocabulary of " + std::to_string(old_vocab.size()));
  }
  if (mode == CptMode::kSingleLang && language >= new_set.num_languages()) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "language index " + std::to_string(language));
  }
  const std::size_t n = new_set.size();
  Matrix out(static_cast<Eigen::Index>(n), old_table.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (mode == CptMode::kSingleLang) {
      out.row(row) = mean_of(
          old_table,
          cpt_constituents(old_vocab, new_set.vocab(language).token(static_cast<TokenId>(i))));
      continue;
    }
    Eigen::RowVectorXd pooled = Eigen::RowVectorXd::Zero(old_table.cols());
    for (std::size_t l = 0; l < new_set.num_languages(); ++l) {
      pooled += mean_of(old_table,
                        cpt_constituents(old_vocab,
                                         new_set.vocab(l).token(static_cast<TokenId>(i))));
    }
    out.row(row) = pooled / static_cast<double>(new_set.num_languages());
  }
  return out;
}

const Matrix& TensorFile::get(std::string_view name) const {
  for (const NamedMatrix& t : tensors) {
    if (t.name == name) return t.values;
  }
  throw Error(ErrorKind::kInvalidFormat, "tensor '" + std::string(name) + "' absent");
}

namespace {

void put_float_le(std::string& out, float value) {
  auto bits = std::bit_cast<std::uint32_t>(value);
  for (int b = 0; b < 4; ++b) {
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  }
}

float get_float_le(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return std::bit_cast<float>(bits);
}

}  // namespace

void save_tensors(const std::filesystem::path& path, const TensorFile& file) {
  json header;
  header["format"] = "paratok-tensors";
  header["version"] = 1;
  header["dtype"] = "float32-le";
  header["meta"] = file.meta;
  json list = json::array();
  std::size_t total = 0;
  for (const NamedMatrix& t : file.tensors) {
    list.push_back({{"name", t.name}, {"rows", t.values.rows()}, {"cols", t.values.cols()}});
    total += static_cast<std::size_t>(t.values.size());
  }
  header["tensors"] = std::move(list);
  std::string out = header.dump() + "\n";
  out.reserve(out.size() + 4 * total);
  for (const NamedMatrix& t : file.tensors) {
    for (Eigen::Index r = 0; r < t.values.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.values.cols(); ++c) {
        put_float_le(out, static_cast<float>(t.values(r, c)));
      }
    }
  }
  write_file_atomic(path, out);
}

TensorFile load_tensors(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  const std::size_t nl = data.find('\n');
  if (nl == std::string::npos) {
    throw Error(ErrorKind::kInvalidFormat, path.string() + ": missing header line");
  }
  TensorFile file;
  try {
    const json header = json::parse(data.substr(0, nl));
    if (header.value("format", "") != "paratok-tensors") {
      throw Error(ErrorKind::kInvalidFormat, path.string() + ": not a tensor file");
    }
    file.meta = header.value("meta", json::object());
    const auto* p = reinterpret_cast<const unsigned char*>(data.data()) + nl + 1;
    const auto* end = reinterpret_cast<const unsigned char*>(data.data()) + data.size();
    for (const json& t : header.at("tensors")) {
      NamedMatrix m;
      m.name = t.at("name").get<std::string>();
      const auto rows = t.at("rows").get<Eigen::Index>();
      const auto cols = t.at("cols").get<Eigen::Index>();
      if (rows < 0 || cols < 0 ||
          static_cast<std::size_t>(end - p) < static_cast<std::size_t>(rows * cols) * 4) {
        throw Error(ErrorKind::kInvalidFormat, path.string() + ": truncated tensor data");
      }
      m.values.resize(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c, p += 4) m.values(r, c) = get_float_le(p);
      }
      file.tensors.push_back(std::move(m));
    }
    if (p != end) {
      throw Error(ErrorKind::kInvalidFormat, path.string() + ": trailing bytes");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidFormat, path.string() + ": " + e.what());
  }
  return file;
}

void save_tables(const std::filesystem::path& path, const EmbeddingTables& tables,
                 ComposeVariant variant) {
  TensorFile file;
  const TableSizes s = tables.sizes();
  file.meta = {{"vocab_size", s.vocab_size},   {"num_segments", s.num_segments},
               {"max_len", s.max_len},         {"num_languages", s.num_languages},
               {"d", tables.dim},              {"seed", tables.seed},
               {"variant", std::string(variant_name(variant))}};
  file.tensors = {{"token", tables.token},
                  {"segment", tables.segment},
                  {"position", tables.position},
                  {"language", tables.language}};
  save_tensors(path, file);
}

EmbeddingTables load_tables(const std::filesystem::path& path) {
  TensorFile file = load_tensors(path);
  EmbeddingTables t;
  t.token = file.get("token");
  t.segment = file.get("segment");
  t.position = file.get("position");
  t.language = file.get("language");
  t.dim = static_cast<std::size_t>(t.token.cols());
  t.seed = file.meta.value("seed", std::uint64_t{0});
  if (t.segment.cols() != t.token.cols() || t.position.cols() != t.token.cols() ||
      t.language.cols() != t.token.cols()) {
    throw Error(ErrorKind::kInvalidFormat, path.string() + ": table widths differ");
  }
  return t;
}

}  // namespace paratok
