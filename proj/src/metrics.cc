#include "paratok/metrics.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "paratok/error.h"

namespace paratok {

Encoding SharedTokenizer::encode(std::string_view, std::string_view text) const {
  return paratok::encode(vocab_, text, options_);
}

std::size_t ParallelTokenizer::index_of(std::string_view lang) const {
  if (auto i = set_.find_code(lang)) return *i;
  if (auto i = set_.find_tag(lang)) return *i;
  throw Error(ErrorKind::kUnknownLanguageToken, std::string(lang));
}

Encoding ParallelTokenizer::encode(std::string_view lang, std::string_view text) const {
  const std::size_t l = index_of(lang);
  Encoding enc = paratok::encode(set_.vocab(l), text, options_);
  enc.language_id = l;
  return enc;
}

TokenId ParallelTokenizer::unk_id(std::string_view lang) const {
  return set_.vocab(index_of(lang)).unk_id();
}

ParallelCorpus::ParallelCorpus(std::vector<std::string> languages,
                               std::vector<std::vector<std::string>> rows)
    : languages_(std::move(languages)), rows_(std::move(rows)) {
  if (languages_.empty()) {
    throw Error(ErrorKind::kInvalidFormat, "parallel corpus has no languages");
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != languages_.size()) {
      throw Error(ErrorKind::kInvalidFormat,
                  "row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows_[r].size()) + " cells, expected " +
                      std::to_string(languages_.size()));
    }
    for (std::size_t c = 0; c < rows_[r].size(); ++c) {
      if (rows_[r][c].empty()) {
        throw Error(ErrorKind::kInvalidFormat, "row " + std::to_string(r + 1) +
                                                   " has an empty " +
                                                   languages_[c] + " cell");
      }
    }
  }
}

bool ParallelCorpus::has_language(std::string_view lang) const {
  return std::find(languages_.begin(), languages_.end(), lang) != languages_.end();
}

std::vector<std::string> ParallelCorpus::column(std::string_view lang) const {
  auto it = std::find(languages_.begin(), languages_.end(), lang);
  if (it == languages_.end()) {
    throw Error(ErrorKind::kInvalidArgument,
                "language '" + std::string(lang) + "' not in corpus");
  }
  const auto c = static_cast<std::size_t>(it - languages_.begin());
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row[c]);
  return out;
}

namespace {

std::vector<std::string> split_tsv(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos
                                               ? std::string_view::npos
                                               : tab - start));
    if (tab == std::string_view::npos) return fields;
    start = tab + 1;
  }
}

}  // namespace

ParallelCorpus ParallelCorpus::parse_tsv(std::string_view contents) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  bool have_header = false;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!have_header) {
      header = split_tsv(line);
      have_header = true;
    } else {
      rows.push_back(split_tsv(line));
    }
  }
  if (!have_header) throw Error(ErrorKind::kInvalidFormat, "corpus has no header row");
  return ParallelCorpus(std::move(header), std::move(rows));
}

ParallelCorpus ParallelCorpus::load_tsv(const std::filesystem::path& path) {
  return parse_tsv(read_file(path));
}

FertilityResult fertility(const Tokenizer& tokenizer, std::string_view lang,
                          std::span<const std::string> sentences) {
  FertilityResult result;
  const TokenId unk = tokenizer.unk_id(lang);
  for (const std::string& s : sentences) {
    const Encoding enc = tokenizer.encode(lang, s);
    for (const WordSpan& span : enc.word_spans) {
      result.tokens += span.end - span.begin;
      ++result.words;
      if (span.end - span.begin == 1 && enc.ids[span.begin] == unk) ++result.unk_words;
    }
  }
  if (result.words == 0) {
    throw Error(ErrorKind::kNoWords, "no whitespace words in " + std::string(lang));
  }
  result.value =
      static_cast<double>(result.tokens) / static_cast<double>(result.words);
  result.not_applicable = 2 * result.unk_words > result.words;
  return result;
}

ParityResult parity(const Tokenizer& tokenizer, const ParallelCorpus& corpus,
                    std::string_view lang, std::string_view reference,
                    ParityMode mode) {
  const std::vector<std::string> lhs = corpus.column(lang);
  const std::vector<std::string> rhs = corpus.column(reference);
  ParityResult result;
  result.rows = lhs.size();
  if (result.rows == 0) throw Error(ErrorKind::kInvalidArgument, "corpus has no rows");
  // Kahan summation keeps the mean independent of accumulation error.
  double sum = 0.0, carry = 0.0;
  for (std::size_t r = 0; r < lhs.size(); ++r) {
    const std::size_t cl = tokenizer.encode(lang, lhs[r]).content_size();
    const std::size_t cr = tokenizer.encode(reference, rhs[r]).content_size();
    if (cl == 0 || cr == 0) {
      throw Error(ErrorKind::kZeroTokenSentence, "row " + std::to_string(r + 1));
    }
    result.lang_tokens += cl;
    result.reference_tokens += cr;
    const double ratio = static_cast<double>(std::max(cl, cr)) /
                         static_cast<double>(std::min(cl, cr));
    const double y = ratio - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  if (mode == ParityMode::kMeanSentenceRatio) {
    result.value = sum / static_cast<double>(result.rows);
  } else {
    result.value =
        static_cast<double>(std::max(result.lang_tokens, result.reference_tokens)) /
        static_cast<double>(std::min(result.lang_tokens, result.reference_tokens));
  }
  return result;
}

std::size_t unk_count(const Tokenizer& tokenizer, std::string_view lang,
                      std::span<const std::string> sentences) {
  const TokenId unk = tokenizer.unk_id(lang);
  std::size_t count = 0;
  for (const std::string& s : sentences) {
    const Encoding enc = tokenizer.encode(lang, s);
    count += static_cast<std::size_t>(std::count(enc.ids.begin(), enc.ids.end(), unk));
  }
  return count;
}

namespace {

Matrix normalized_rows(const Matrix& m, std::string_view which) {
  Matrix out = m;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorKind::kDegenerateZeroVector,
                  std::string(which) + " row " + std::to_string(r));
    }
    out.row(r) /= norm;
  }
  return out;
}

// Sum of the k largest entries.
template <typename Vec>
double top_k_sum(const Vec& values, std::size_t k) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(),
                    std::greater<>());
  return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
}

}  // namespace

XsimResult xsim(const Matrix& src, const Matrix& tgt, std::size_t k) {
  if (src.rows() != tgt.rows() || src.cols() != tgt.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "source and target matrices differ in shape");
  }
  const auto n = static_cast<std::size_t>(src.rows());
  if (n < 2) throw Error(ErrorKind::kInvalidArgument, "xsim needs at least 2 rows");
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  k = std::min(k, n - 1);

  const Matrix x = normalized_rows(src, "source");
  const Matrix y = normalized_rows(tgt, "target");
  const Matrix sim = x * y.transpose();  // sim(i, j) = cos(src_i, tgt_j)

  std::vector<double> src_nn(n), tgt_nn(n);
  for (std::size_t i = 0; i < n; ++i) {
    src_nn[i] = top_k_sum(Eigen::RowVectorXd(sim.row(static_cast<Eigen::Index>(i))), k);
    tgt_nn[i] = top_k_sum(Eigen::VectorXd(sim.col(static_cast<Eigen::Index>(i))), k);
  }

  XsimResult result;
  result.k = k;
  result.retrieved.resize(n);
  std::size_t errors = 0;
  const double two_k = 2.0 * static_cast<double>(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double margin = (src_nn[i] + tgt_nn[j]) / two_k;
      const double score =
          sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / margin;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    result.retrieved[i] = best;
    if (best != i) ++errors;
  }
  result.error_rate = 100.0 * static_cast<double>(errors) / static_cast<double>(n);
  return result;
}

double xsim_error_rate(const Matrix& src, const Matrix& tgt, std::size_t k) {
  return xsim(src, tgt, k).error_rate;
}

PcaResult pca_project(const Matrix& points, std::size_t out_dims) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (n < 2) throw Error(ErrorKind::kInvalidArgument, "PCA needs at least 2 points");
  if (out_dims == 0 || out_dims > std::min(n, d)) {
    throw Error(ErrorKind::kInvalidArgument,
                "out_dims must be in [1, min(n, d)] = [1, " +
                    std::to_string(std::min(n, d)) + "]");
  }
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const Matrix centered = points.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidArgument, "eigendecomposition failed");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values(static_cast<Eigen::Index>(a)) > values(static_cast<Eigen::Index>(b));
  });

  const double total = std::max(0.0, cov.trace());
  const double largest = std::max(0.0, values(static_cast<Eigen::Index>(order[0])));
  const double tol = 1e-12 * std::max(largest, 1e-300);

  PcaResult result;
  result.coords = Matrix::Zero(static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(out_dims));
  result.components = Matrix::Zero(static_cast<Eigen::Index>(out_dims),
                                   static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < out_dims; ++c) {
    const auto src = static_cast<Eigen::Index>(order[c]);
    const double lambda = values(src);
    if (!(lambda > tol)) {
      result.rank_deficient = true;
      result.eigenvalues.push_back(0.0);
      result.explained_ratio.push_back(0.0);
      continue;
    }
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    if (v(arg) < 0) v = -v;
    result.components.row(static_cast<Eigen::Index>(c)) = v.transpose();
    result.coords.col(static_cast<Eigen::Index>(c)) = centered * v;
    result.eigenvalues.push_back(lambda);
    result.explained_ratio.push_back(total > 0 ? lambda / total : 0.0);
  }
  return result;
}

}  // namespace paratok
