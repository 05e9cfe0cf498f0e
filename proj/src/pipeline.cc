#include "paratok/pipeline.h"

#include <cstdlib>
#include <future>
#include <set>
#include <system_error>

#include "paratok/corpus.h"
#include "paratok/error.h"
#include "paratok/wordpiece.h"

namespace paratok {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::vector<LanguageSpec> PipelineConfig::language_specs() const {
  std::vector<LanguageSpec> specs;
  for (const LanguageConfig& l : languages) {
    specs.push_back({l.code, l.tag.empty() ? default_language_tag(l.code) : l.tag});
  }
  return specs;
}

void PipelineConfig::validate() const {
  if (languages.empty()) throw Error(ErrorKind::kValidation, "no languages configured");
  std::set<std::string> codes, tags;
  bool pivot_found = false;
  for (const LanguageSpec& s : language_specs()) {
    if (s.code.empty()) throw Error(ErrorKind::kValidation, "empty language code");
    if (!codes.insert(s.code).second) {
      throw Error(ErrorKind::kValidation, "duplicate language code '" + s.code + "'");
    }
    if (!tags.insert(s.tag).second) {
      throw Error(ErrorKind::kValidation, "duplicate language tag '" + s.tag + "'");
    }
    pivot_found = pivot_found || s.code == pivot;
  }
  if (!pivot_found) {
    throw Error(ErrorKind::kValidation, "pivot '" + pivot + "' is not a configured language");
  }
  const std::size_t minimum = kNumSpecialRoles + languages.size() + char_subset;
  if (vocab_cap < minimum) {
    throw Error(ErrorKind::kValidation,
                "vocab_cap " + std::to_string(vocab_cap) + " below 5 + |languages| + "
                "char_subset = " + std::to_string(minimum));
  }
  for (const LanguageConfig& l : languages) {
    if (l.corpus.empty()) {
      throw Error(ErrorKind::kValidation, "language '" + l.code + "' has no corpus");
    }
    if (l.code != pivot && l.dictionary.empty()) {
      throw Error(ErrorKind::kValidation, "language '" + l.code + "' has no dictionary");
    }
  }
  if (output_dir.empty()) throw Error(ErrorKind::kValidation, "output_dir not set");
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  PipelineConfig c;
  try {
    for (const json& l : j.at("languages")) {
      LanguageConfig lc;
      lc.code = l.at("code").get<std::string>();
      lc.tag = l.value("tag", "");
      lc.corpus = resolve(l.value("corpus", ""));
      lc.dictionary = resolve(l.value("dictionary", ""));
      c.languages.push_back(std::move(lc));
    }
    c.pivot = j.at("pivot").get<std::string>();
    c.vocab_cap = j.value("vocab_cap", c.vocab_cap);
    c.char_subset = j.value("char_subset", c.char_subset);
    c.min_pair_frequency = j.value("min_pair_frequency", c.min_pair_frequency);
    c.lowercase = j.value("lowercase", c.lowercase);
    c.seed = j.value("seed", c.seed);
    c.output_dir = resolve(j.value("output_dir", ""));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, path.string() + ": " + e.what());
  }
  PipelineConfig c = from_json(j, path.parent_path());
  if (const char* env = std::getenv("PARATOK_OUTPUT_DIR"); env && *env) {
    c.output_dir = env;
  }
  return c;
}

std::string classification_tsv(const Vocabulary& vocab,
                               std::span<const std::string> language_tags) {
  std::string out;
  for (const std::string& t : vocab.tokens()) {
    out += t;
    out += '\t';
    out += category_name(classify_token(t, vocab.continuation_prefix(), language_tags));
    out += '\n';
  }
  return out;
}

std::string lines_text(std::span<const std::string> lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

json PipelineReport::to_json() const {
  json j;
  json cats = json::object();
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const auto cat = static_cast<TokenCategory>(c);
    json entry = {{"count", pivot_categories.count(cat)}};
    if (c < kNumCoreCategories) entry["fraction"] = pivot_categories.fraction(cat);
    cats[std::string(category_name(cat))] = std::move(entry);
  }
  j["pivot_categories"] = {{"categories", cats},
                           {"degenerate", pivot_categories.degenerate}};
  json langs = json::object();
  for (const auto& [code, cov] : coverage) {
    json statuses = json::object();
    const auto& counts = lexicon_counts.at(code);
    for (std::size_t s = 0; s < kNumLexiconStatuses; ++s) {
      statuses[std::string(status_name(static_cast<LexiconStatus>(s)))] = counts[s];
    }
    langs[code] = {{"lexicon", statuses},
                   {"accepted", cov.accepted},
                   {"word_tokens", cov.word_tokens},
                   {"non_special", cov.non_special},
                   {"word_type_fraction", cov.word_type_fraction},
                   {"total_fraction", cov.total_fraction}};
  }
  j["coverage"] = std::move(langs);
  json fill = json::object();
  for (const auto& [code, f] : alignment.per_language_fill) {
    fill[code] = {{"placeholder_filled", f.placeholder_filled},
                  {"appended", f.appended},
                  {"unused_placeholders", f.unused_placeholders}};
  }
  j["alignment"] = {{"aligned", alignment.aligned},
                    {"size", alignment.size},
                    {"aligned_fraction", alignment.aligned_fraction},
                    {"per_language_fill", fill}};
  return j;
}

namespace {

template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "stage " + name + ": " + e.message());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kIoError, "stage " + name + ": " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  const std::vector<LanguageSpec> specs = config.language_specs();
  std::vector<std::string> tags;
  for (const LanguageSpec& s : specs) tags.push_back(s.tag);

  std::vector<IngestResult> corpora(config.languages.size());
  run_stage("ingest", [&] {
    for (std::size_t l = 0; l < config.languages.size(); ++l) {
      corpora[l] = ingest_corpus(config.languages[l].corpus);
    }
  });

  TrainerConfig trainer;
  trainer.vocab_cap = config.vocab_cap;
  trainer.min_pair_frequency = config.min_pair_frequency;
  trainer.lowercase = config.lowercase;

  std::size_t pivot_idx = 0;
  for (std::size_t l = 0; l < specs.size(); ++l) {
    if (specs[l].code == config.pivot) pivot_idx = l;
  }

  // Every language trains on its own thread; results are position-indexed so
  // scheduling cannot change the output.
  std::vector<std::future<Vocabulary>> training;
  for (std::size_t l = 0; l < specs.size(); ++l) {
    training.push_back(std::async(std::launch::async, [&, l] {
      return run_stage("train-mono[" + specs[l].code + "]",
                       [&] { return train_wordpiece(corpora[l].lines, trainer); });
    }));
  }
  std::vector<Vocabulary> monos;
  for (auto& f : training) f.wait();
  for (auto& f : training) monos.push_back(f.get());
  const Vocabulary& pivot_vocab = monos[pivot_idx];

  const std::vector<std::string> words =
      run_stage("classify", [&] { return word_tokens(pivot_vocab, tags); });

  std::map<std::string, BilingualLexicon> lexicons;
  for (std::size_t l = 0; l < specs.size(); ++l) {
    if (l == pivot_idx) continue;
    const std::string& code = specs[l].code;
    lexicons.emplace(code, run_stage("align[" + code + "]", [&] {
      const TsvProvider provider = TsvProvider::load(config.languages[l].dictionary);
      AlignOptions options;
      options.target_scripts = script_profile(corpora[l].lines);
      options.lowercase_target = config.lowercase;
      return align_word_tokens(words, provider, config.pivot, code, options);
    }));
  }

  std::map<std::string, Vocabulary> mono_map;
  for (std::size_t l = 0; l < specs.size(); ++l) mono_map.emplace(specs[l].code, monos[l]);
  ParallelConfig pconfig{config.vocab_cap, config.char_subset};
  ParallelVocabSet set = run_stage("build-parallel", [&] {
    return build_parallel_set(pivot_vocab, specs, config.pivot, lexicons, mono_map,
                              pconfig);
  });

  PipelineReport report;
  report.pivot_categories = category_report(pivot_vocab, tags);
  for (const auto& [code, lex] : lexicons) {
    report.coverage[code] = alignment_coverage(lex, pivot_vocab, tags);
    auto& counts = report.lexicon_counts[code];
    for (std::size_t s = 0; s < kNumLexiconStatuses; ++s) {
      counts[s] = lex.count(static_cast<LexiconStatus>(s));
    }
  }
  report.alignment = alignment_stats(set);

  run_stage("write", [&] {
    fs::path tmp = config.output_dir;
    tmp += ".tmp";
    std::error_code ec;
    fs::remove_all(tmp, ec);
    fs::create_directories(tmp);
    for (std::size_t l = 0; l < specs.size(); ++l) {
      monos[l].save(tmp / "mono" / (specs[l].code + ".vocab.txt"));
    }
    write_file_atomic(tmp / ("taxonomy." + config.pivot + ".tsv"),
                      classification_tsv(pivot_vocab, tags));
    write_file_atomic(tmp / ("words." + config.pivot + ".txt"), lines_text(words));
    for (const auto& [code, lex] : lexicons) {
      lex.save(tmp / "lexicon" / (code + ".tsv"));
    }
    set.save(tmp / "parallel");
    json report_json = report.to_json();
    report_json["config"] = {{"pivot", config.pivot},
                             {"vocab_cap", config.vocab_cap},
                             {"char_subset", config.char_subset},
                             {"min_pair_frequency", config.min_pair_frequency},
                             {"lowercase", config.lowercase},
                             {"seed", config.seed}};
    write_file_atomic(tmp / "report.json", report_json.dump(2) + "\n");
    fs::remove_all(config.output_dir, ec);
    if (config.output_dir.has_parent_path()) {
      fs::create_directories(config.output_dir.parent_path());
    }
    fs::rename(tmp, config.output_dir, ec);
    if (ec) {
      throw Error(ErrorKind::kIoError, "cannot move output into place: " + ec.message());
    }
  });
  return {std::move(set), std::move(report)};
}

}  // namespace paratok
