// paratok: command-line front end for the parallel tokenizer pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paratok/corpus.h"
#include "paratok/embedding.h"
#include "paratok/error.h"
#include "paratok/lexicon.h"
#include "paratok/metrics.h"
#include "paratok/parallel_vocab.h"
#include "paratok/pipeline.h"
#include "paratok/taxonomy.h"
#include "paratok/utf8.h"
#include "paratok/vocabulary.h"
#include "paratok/wordpiece.h"

namespace fs = std::filesystem;
using namespace paratok;

namespace {

enum ExitCode { kOk = 0, kValidationExit = 2, kIoExit = 3, kStageExit = 4 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
    case ErrorKind::kInvalidArgument:
      return kValidationExit;
    case ErrorKind::kFileNotFound:
    case ErrorKind::kIoError:
    case ErrorKind::kInvalidFormat:
    case ErrorKind::kNotUtf8Fatal:
      return kIoExit;
    default:
      return kStageExit;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
    return;
  }
  write_file_atomic(path, contents);
}

// Numeric matrix stored as CSV: one row per line, comma separated.
Matrix read_matrix_csv(const fs::path& path) {
  const std::vector<std::string> lines = ingest_corpus(path).lines;
  std::vector<std::vector<double>> rows;
  for (const std::string& line : lines) {
    std::vector<double> row;
    for (const std::string& cell : split_list(line)) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw Error(ErrorKind::kInvalidFormat,
                    path.string() + ": not a number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::kInvalidFormat, path.string() + ": ragged matrix");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::kInvalidFormat, path.string() + ": empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

// Tensor file (first tensor, or the one named "embeddings") or CSV.
Matrix read_matrix(const fs::path& path) {
  const std::string contents = read_file(path);
  if (contents.rfind("{", 0) == 0) {
    const TensorFile file = load_tensors(path);
    for (const NamedMatrix& t : file.tensors) {
      if (t.name == "embeddings") return t.values;
    }
    if (file.tensors.empty()) throw Error(ErrorKind::kInvalidFormat, path.string() + ": no tensors");
    return file.tensors.front().values;
  }
  return read_matrix_csv(path);
}

std::string matrix_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Either a single vocabulary file or a parallel set directory.
struct LoadedTokenizer {
  std::optional<Vocabulary> vocab;
  std::optional<ParallelVocabSet> set;
  std::unique_ptr<Tokenizer> tokenizer;
  std::string label;

  static LoadedTokenizer open(const std::string& path, const EncodeOptions& options) {
    LoadedTokenizer t;
    if (fs::is_directory(path)) {
      t.set.emplace(ParallelVocabSet::load(path));
      t.tokenizer = std::make_unique<ParallelTokenizer>(*t.set, options);
      t.label = "parallel";
    } else {
      t.vocab.emplace(Vocabulary::load(path));
      t.tokenizer = std::make_unique<SharedTokenizer>(*t.vocab, options);
      t.label = "shared";
    }
    return t;
  }
};

struct Args {
  // train-mono
  std::string corpus, out;
  std::size_t cap = kDefaultVocabCap;
  std::size_t min_pair_frequency = 2;
  bool no_lowercase = false;
  // classify
  std::string vocab, tags;
  // align
  std::string words, lexicon, src, tgt, script_corpus;
  // build-parallel
  std::string pivot_vocab, lexicon_dir, mono_dir, pivot, languages;
  std::size_t char_subset = kDefaultCharSubset;
  // encode / metrics
  std::string parallel, lang, text, input, tokenizer, reference, parallel_corpus;
  bool corpus_ratio = false;
  // xsim / pca
  std::string src_matrix, tgt_matrix;
  std::size_t k = 4;
  std::size_t dims = 2;
  // compose / cpt-init
  std::string tables, variant = "add-to-all", old_vocab, old_table, mode = "single";
  std::size_t dim = kDefaultEmbeddingDim, max_len = kDefaultMaxLen;
  std::uint64_t seed = 0;
  // run
  std::string config;
};

int cmd_train_mono(const Args& a) {
  TrainerConfig config;
  config.vocab_cap = a.cap;
  config.min_pair_frequency = a.min_pair_frequency;
  config.lowercase = !a.no_lowercase;
  const IngestResult corpus = ingest_corpus(a.corpus);
  const Vocabulary vocab = train_wordpiece(corpus.lines, config);
  emit(a.out, vocab.serialize());
  return kOk;
}

std::vector<std::string> tag_list(const std::string& tags) {
  return tags.empty() ? default_language_tags() : split_list(tags);
}

int cmd_classify(const Args& a) {
  const Vocabulary vocab = Vocabulary::load(a.vocab);
  emit(a.out, classification_tsv(vocab, tag_list(a.tags)));
  return kOk;
}

int cmd_align(const Args& a) {
  const std::vector<std::string> words = ingest_corpus(a.words).lines;
  const TsvProvider provider = TsvProvider::load(a.lexicon);
  AlignOptions options;
  options.lowercase_target = !a.no_lowercase;
  if (!a.script_corpus.empty()) {
    options.target_scripts = script_profile(ingest_corpus(a.script_corpus).lines);
  }
  const BilingualLexicon lex = align_word_tokens(words, provider, a.src, a.tgt, options);
  emit(a.out, lex.to_tsv());
  return kOk;
}

std::vector<LanguageSpec> language_specs(const std::string& codes, const std::string& tags) {
  const std::vector<std::string> code_list = split_list(codes);
  const std::vector<std::string> tag_items = split_list(tags);
  if (!tag_items.empty() && tag_items.size() != code_list.size()) {
    throw Error(ErrorKind::kValidation, "--tags must list one tag per language");
  }
  std::vector<LanguageSpec> specs;
  for (std::size_t i = 0; i < code_list.size(); ++i) {
    specs.push_back({code_list[i],
                     tag_items.empty() ? default_language_tag(code_list[i]) : tag_items[i]});
  }
  if (specs.empty()) throw Error(ErrorKind::kValidation, "--languages is empty");
  return specs;
}

int cmd_build_parallel(const Args& a) {
  const std::vector<LanguageSpec> specs = language_specs(a.languages, a.tags);
  const Vocabulary pivot_vocab = Vocabulary::load(a.pivot_vocab);
  std::map<std::string, BilingualLexicon> lexicons;
  std::map<std::string, Vocabulary> monos;
  for (const LanguageSpec& s : specs) {
    if (s.code == a.pivot) continue;
    const fs::path lex = fs::path(a.lexicon_dir) / (s.code + ".tsv");
    if (fs::exists(lex)) lexicons.emplace(s.code, BilingualLexicon::load(lex, a.pivot, s.code));
    const fs::path mono = fs::path(a.mono_dir) / (s.code + ".vocab.txt");
    if (fs::exists(mono)) monos.emplace(s.code, Vocabulary::load(mono));
  }
  const ParallelVocabSet set =
      build_parallel_set(pivot_vocab, specs, a.pivot, lexicons, monos,
                         ParallelConfig{a.cap, a.char_subset});
  set.save(a.out);
  return kOk;
}

std::vector<std::string> input_lines(const Args& a) {
  if (!a.text.empty()) return {a.text};
  if (!a.input.empty()) return ingest_corpus(a.input).lines;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

EncodeOptions encode_options(const Args& a) {
  EncodeOptions o;
  o.lowercase = !a.no_lowercase;
  return o;
}

int cmd_encode(const Args& a) {
  const EncodeOptions options = encode_options(a);
  std::optional<Vocabulary> vocab;
  std::optional<ParallelVocabSet> set;
  if (!a.parallel.empty()) {
    set.emplace(ParallelVocabSet::load(a.parallel));
  } else if (!a.vocab.empty()) {
    vocab.emplace(Vocabulary::load(a.vocab));
  } else {
    throw Error(ErrorKind::kValidation, "encode needs --vocab or --parallel");
  }
  std::string lang_token = a.lang;
  if (set) {
    if (lang_token.empty()) throw Error(ErrorKind::kValidation, "--lang required with --parallel");
    if (auto idx = set->find_code(lang_token)) lang_token = set->languages()[*idx].tag;
  }
  std::string out;
  for (const std::string& line : input_lines(a)) {
    const Encoding enc =
        set ? dispatch_encode(*set, lang_token, line, options) : encode(*vocab, line, options);
    out += enc.to_json();
    out += '\n';
  }
  emit(a.out, out);
  return kOk;
}

int cmd_metric(const Args& a, const std::string& metric) {
  const LoadedTokenizer t = LoadedTokenizer::open(a.tokenizer, encode_options(a));
  std::string value;
  if (metric == "parity") {
    const ParallelCorpus corpus = ParallelCorpus::load_tsv(a.parallel_corpus);
    const ParityResult r =
        parity(*t.tokenizer, corpus, a.lang, a.reference,
               a.corpus_ratio ? ParityMode::kCorpusRatio : ParityMode::kMeanSentenceRatio);
    value = format_double(r.value);
  } else {
    std::vector<std::string> sentences;
    if (!a.parallel_corpus.empty()) {
      sentences = ParallelCorpus::load_tsv(a.parallel_corpus).column(a.lang);
    } else {
      sentences = input_lines(a);
    }
    if (metric == "fertility") {
      const FertilityResult r = fertility(*t.tokenizer, a.lang, sentences);
      value = r.not_applicable ? "n/a" : format_double(r.value);
    } else {
      value = std::to_string(unk_count(*t.tokenizer, a.lang, sentences));
    }
  }
  emit(a.out, "metric,tokenizer,language,value\n" + metric + "," + t.label + "," + a.lang +
                  "," + value + "\n");
  return kOk;
}

int cmd_xsim(const Args& a) {
  const XsimResult r = xsim(read_matrix(a.src_matrix), read_matrix(a.tgt_matrix), a.k);
  emit(a.out, "metric,k,value\nxsim," + std::to_string(r.k) + "," +
                  format_double(r.error_rate) + "\n");
  return kOk;
}

int cmd_pca(const Args& a) {
  const PcaResult r = pca_project(read_matrix(a.input), a.dims);
  if (r.rank_deficient) std::cerr << "warning: RankDeficient: trailing dims zero-filled\n";
  emit(a.out, matrix_csv(r.coords));
  return kOk;
}

int cmd_compose(const Args& a) {
  const EncodeOptions options = encode_options(a);
  const ComposeVariant variant = parse_variant(a.variant);
  Encoding enc;
  std::vector<bool> mask;
  std::size_t vocab_size = 0, num_languages = 1;
  const std::vector<std::string> lines = input_lines(a);
  if (lines.size() != 1) throw Error(ErrorKind::kValidation, "compose takes exactly one line");
  if (!a.parallel.empty()) {
    const ParallelVocabSet set = ParallelVocabSet::load(a.parallel);
    std::string tag = a.lang;
    if (auto idx = set.find_code(tag)) tag = set.languages()[*idx].tag;
    enc = dispatch_encode(set, tag, lines.front(), options);
    mask = set.aligned_mask();
    vocab_size = set.size();
    num_languages = set.num_languages();
  } else if (!a.vocab.empty()) {
    const Vocabulary vocab = Vocabulary::load(a.vocab);
    enc = encode(vocab, lines.front(), options);
    vocab_size = vocab.size();
  } else {
    throw Error(ErrorKind::kValidation, "compose needs --vocab or --parallel");
  }
  const EmbeddingTables tables =
      a.tables.empty() ? init_tables({vocab_size, 2, a.max_len, num_languages}, a.dim, a.seed)
                       : load_tables(a.tables);
  const ComposedInput composed = compose(tables, enc, variant, mask);
  if (a.out.empty() || a.out == "-") {
    emit("", matrix_csv(composed.rows));
  } else {
    TensorFile file;
    file.meta = {{"variant", std::string(variant_name(variant))}};
    file.tensors.push_back({"composed", composed.rows});
    save_tensors(a.out, file);
  }
  return kOk;
}

int cmd_cpt_init(const Args& a) {
  const Vocabulary old_vocab = Vocabulary::load(a.old_vocab);
  const TensorFile old_file = load_tensors(a.old_table);
  const ParallelVocabSet set = ParallelVocabSet::load(a.parallel);
  CptMode mode;
  if (a.mode == "single") {
    mode = CptMode::kSingleLang;
  } else if (a.mode == "parallel") {
    mode = CptMode::kParallelAllLangs;
  } else {
    throw Error(ErrorKind::kValidation, "--mode must be single or parallel");
  }
  std::size_t language = set.pivot_index();
  if (!a.lang.empty()) {
    auto idx = set.find_code(a.lang);
    if (!idx) idx = set.find_tag(a.lang);
    if (!idx) throw Error(ErrorKind::kUnknownLanguageToken, a.lang);
    language = *idx;
  }
  const Matrix table =
      cpt_init_new_embeddings(old_vocab, old_file.get("token"), set, mode, language);
  TensorFile out;
  out.meta = {{"mode", a.mode}, {"language", set.languages()[language].code}};
  out.tensors.push_back({"token", table});
  save_tensors(a.out, out);
  return kOk;
}

int cmd_run(const Args& a) {
  PipelineConfig config = PipelineConfig::load(a.config);
  if (!a.out.empty()) config.output_dir = a.out;
  const PipelineResult result = run_pipeline(config);
  std::cout << "wrote " << config.output_dir.string() << " (" << result.set.size()
            << " tokens per language, " << result.report.alignment.aligned << " aligned)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paratok: parallel tokenizers with index-aligned vocabularies"};
  app.require_subcommand(1);
  Args a;

  auto* train = app.add_subcommand("train-mono", "Train a WordPiece vocabulary");
  train->add_option("--corpus", a.corpus, "Training text, one sentence per line")->required();
  train->add_option("--out", a.out, "Vocabulary output (default stdout)");
  train->add_option("--cap", a.cap, "Vocabulary cap");
  train->add_option("--min-pair-frequency", a.min_pair_frequency, "Minimum merge count");
  train->add_flag("--no-lowercase", a.no_lowercase, "Keep case");

  auto* classify = app.add_subcommand("classify", "Print token categories as TSV");
  classify->add_option("--vocab", a.vocab, "Vocabulary file")->required();
  classify->add_option("--tags", a.tags, "Comma-separated language tags");
  classify->add_option("--out", a.out, "Output (default stdout)");

  auto* align = app.add_subcommand("align", "Translate and filter Word tokens");
  align->add_option("--words", a.words, "Word list, one per line")->required();
  align->add_option("--lexicon", a.lexicon, "Dictionary TSV")->required();
  align->add_option("--src", a.src, "Source language code")->required();
  align->add_option("--tgt", a.tgt, "Target language code")->required();
  align->add_option("--script-corpus", a.script_corpus, "Target corpus defining valid scripts");
  align->add_option("--out", a.out, "Lexicon TSV output (default stdout)");
  align->add_flag("--no-lowercase", a.no_lowercase, "Keep target case");

  auto* build = app.add_subcommand("build-parallel", "Build the index-aligned vocabulary set");
  build->add_option("--pivot-vocab", a.pivot_vocab, "Pivot vocabulary")->required();
  build->add_option("--lexicon-dir", a.lexicon_dir, "Directory of <code>.tsv lexicons")
      ->required();
  build->add_option("--mono-dir", a.mono_dir, "Directory of <code>.vocab.txt files")
      ->required();
  build->add_option("--out", a.out, "Output directory")->required();
  build->add_option("--pivot", a.pivot, "Pivot language code")->required();
  build->add_option("--languages", a.languages, "Comma-separated codes in index order")
      ->required();
  build->add_option("--tags", a.tags, "Comma-separated tags, one per language");
  build->add_option("--cap", a.cap, "Vocabulary cap");
  build->add_option("--char-subset", a.char_subset, "Reserved character tokens");

  auto add_text_input = [&](CLI::App* sub) {
    sub->add_option("--text", a.text, "Input sentence");
    sub->add_option("--input", a.input, "Input file, one sentence per line");
    sub->add_flag("--no-lowercase", a.no_lowercase, "Keep case");
  };

  auto* enc = app.add_subcommand("encode", "Encode text as JSON lines");
  enc->add_option("--vocab", a.vocab, "Single vocabulary");
  enc->add_option("--parallel", a.parallel, "Parallel set directory");
  enc->add_option("--lang", a.lang, "Language code or tag");
  enc->add_option("--out", a.out, "Output (default stdout)");
  add_text_input(enc);

  auto* metrics = app.add_subcommand("metrics", "Tokenizer metrics as CSV");
  metrics->require_subcommand(1);
  for (const char* name : {"fertility", "parity", "unk"}) {
    auto* m = metrics->add_subcommand(name, std::string("Compute ") + name);
    m->add_option("--tokenizer", a.tokenizer, "Vocabulary file or parallel directory")
        ->required();
    m->add_option("--lang", a.lang, "Language code")->required();
    m->add_option("--corpus", a.parallel_corpus, "Parallel TSV with a header row");
    m->add_option("--out", a.out, "Output (default stdout)");
    add_text_input(m);
    if (std::string(name) == "parity") {
      m->add_option("--reference", a.reference, "Reference language")->required();
      m->add_flag("--corpus-ratio", a.corpus_ratio, "Corpus-level token ratio");
      m->get_option("--corpus")->required();
    }
  }

  auto* xs = app.add_subcommand("xsim", "Margin-based retrieval error rate");
  xs->add_option("--src", a.src_matrix, "Source embeddings (tensor file or CSV)")->required();
  xs->add_option("--tgt", a.tgt_matrix, "Target embeddings (tensor file or CSV)")->required();
  xs->add_option("--k", a.k, "Neighbourhood size");
  xs->add_option("--out", a.out, "Output (default stdout)");

  auto* pca = app.add_subcommand("pca", "Project points onto principal components");
  pca->add_option("--input", a.input, "Points (tensor file or CSV)")->required();
  pca->add_option("--dims", a.dims, "Output dimensions");
  pca->add_option("--out", a.out, "Output (default stdout)");

  auto* comp = app.add_subcommand("compose", "Compose input embeddings for one sentence");
  comp->add_option("--vocab", a.vocab, "Single vocabulary");
  comp->add_option("--parallel", a.parallel, "Parallel set directory");
  comp->add_option("--lang", a.lang, "Language code or tag");
  comp->add_option("--tables", a.tables, "Embedding tables file");
  comp->add_option("--dim", a.dim, "Width when initializing tables");
  comp->add_option("--max-len", a.max_len, "Positions when initializing tables");
  comp->add_option("--seed", a.seed, "Seed when initializing tables");
  comp->add_option("--variant", a.variant, "prepend-lang-token|add-to-all|add-to-unaligned-only");
  comp->add_option("--out", a.out, "Tensor file (default CSV on stdout)");
  add_text_input(comp);

  auto* cpt = app.add_subcommand("cpt-init", "Initialize embeddings for a new vocabulary");
  cpt->add_option("--old-vocab", a.old_vocab, "Old vocabulary")->required();
  cpt->add_option("--old-table", a.old_table, "Tensor file with a 'token' table")->required();
  cpt->add_option("--parallel", a.parallel, "New parallel set directory")->required();
  cpt->add_option("--mode", a.mode, "single|parallel");
  cpt->add_option("--lang", a.lang, "Language for single mode");
  cpt->add_option("--out", a.out, "Output tensor file")->required();

  auto* run = app.add_subcommand("run", "Run the full pipeline from a JSON config");
  run->add_option("--config", a.config, "Pipeline config")->required();
  run->add_option("--out", a.out, "Output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationExit;
  }

  try {
    if (*train) return cmd_train_mono(a);
    if (*classify) return cmd_classify(a);
    if (*align) return cmd_align(a);
    if (*build) return cmd_build_parallel(a);
    if (*enc) return cmd_encode(a);
    if (*metrics) {
      for (CLI::App* m : metrics->get_subcommands()) return cmd_metric(a, m->get_name());
    }
    if (*xs) return cmd_xsim(a);
    if (*pca) return cmd_pca(a);
    if (*comp) return cmd_compose(a);
    if (*cpt) return cmd_cpt_init(a);
    if (*run) return cmd_run(a);
  } catch (const Error& e) {
    std::cerr << "paratok: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "paratok: " << e.what() << "\n";
    return kStageExit;
  }
  return kValidationExit;
}
