#ifndef PARATOK_PIPELINE_H_
#define PARATOK_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "paratok/lexicon.h"
#include "paratok/parallel_vocab.h"
#include "paratok/taxonomy.h"

namespace paratok {

struct LanguageConfig {
  std::string code;
  std::string tag;                   // defaults to "[CODE]"
  std::filesystem::path corpus;      // monolingual training text
  std::filesystem::path dictionary;  // provider TSV; unused for the pivot
};

struct PipelineConfig {
  std::vector<LanguageConfig> languages;
  std::string pivot;
  std::size_t vocab_cap = kDefaultVocabCap;
  std::size_t char_subset = kDefaultCharSubset;
  std::size_t min_pair_frequency = 2;
  bool lowercase = true;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;

  std::vector<LanguageSpec> language_specs() const;
  // Throws Validation.
  void validate() const;

  // Relative paths resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir);
  // Honours the PARATOK_OUTPUT_DIR environment override.
  static PipelineConfig load(const std::filesystem::path& path);
};

// token \t category, one row per vocabulary entry.
std::string classification_tsv(const Vocabulary& vocab,
                               std::span<const std::string> language_tags);

std::string lines_text(std::span<const std::string> lines);

struct PipelineReport {
  CategoryReport pivot_categories;
  std::map<std::string, AlignmentCoverage> coverage;
  std::map<std::string, std::array<std::size_t, kNumLexiconStatuses>> lexicon_counts;
  AlignmentStats alignment;

  nlohmann::json to_json() const;
};

struct PipelineResult {
  ParallelVocabSet set;
  PipelineReport report;
};

// Trains every language, classifies the pivot, aligns each other language
// and builds the parallel set. Writes the output tree atomically:
//   mono/<code>.vocab.txt, taxonomy.<pivot>.tsv, words.<pivot>.txt,
//   lexicon/<code>.tsv, parallel/, report.json
// Stage failures are rethrown with the stage name in the message.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace paratok

#endif  // PARATOK_PIPELINE_H_
