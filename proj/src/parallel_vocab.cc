#include "paratok/parallel_vocab.h"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>
#include <system_error>

#include "paratok/error.h"
#include "paratok/taxonomy.h"
#include "paratok/utf8.h"

namespace paratok {

using json = nlohmann::json;

std::string default_language_tag(std::string_view code) {
  std::string tag = "[";
  for (char c : code) {
    tag += (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  }
  tag += ']';
  return tag;
}

ParallelVocabSet::ParallelVocabSet(std::vector<LanguageSpec> languages,
                                   std::string pivot, std::vector<Vocabulary> vocabs,
                                   std::vector<bool> aligned_mask,
                                   ParallelConfig config, IndexRange word_region,
                                   IndexRange char_region,
                                   std::vector<LanguageFill> fill)
    : languages_(std::move(languages)),
      pivot_(std::move(pivot)),
      vocabs_(std::move(vocabs)),
      aligned_mask_(std::move(aligned_mask)),
      config_(config),
      word_region_(word_region),
      char_region_(char_region),
      fill_(std::move(fill)) {
  if (languages_.empty() || vocabs_.size() != languages_.size() ||
      fill_.size() != languages_.size()) {
    throw Error(ErrorKind::kInvalidFormat,
                "parallel set needs one vocabulary and fill record per language");
  }
  if (!find_code(pivot_)) {
    throw Error(ErrorKind::kValidation, "pivot '" + pivot_ + "' not among languages");
  }
  const std::size_t n = vocabs_.front().size();
  for (std::size_t l = 0; l < vocabs_.size(); ++l) {
    if (vocabs_[l].size() != n) {
      throw Error(ErrorKind::kInvalidFormat,
                  "vocabulary sizes differ: " + languages_[l].code);
    }
    for (std::size_t r = 0; r < kNumSpecialRoles; ++r) {
      const auto role = static_cast<SpecialRole>(r);
      if (vocabs_[l].special_id(role) != vocabs_.front().special_id(role)) {
        throw Error(ErrorKind::kInvalidFormat,
                    "special token indices differ for " + languages_[l].code);
      }
    }
  }
  if (aligned_mask_.size() != n) {
    throw Error(ErrorKind::kInvalidFormat, "aligned mask length differs from size");
  }
}

std::size_t ParallelVocabSet::pivot_index() const { return *find_code(pivot_); }

const Vocabulary& ParallelVocabSet::vocab(std::size_t language) const {
  if (language >= vocabs_.size()) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "language index " + std::to_string(language));
  }
  return vocabs_[language];
}

std::size_t ParallelVocabSet::aligned_count() const {
  return static_cast<std::size_t>(
      std::count(aligned_mask_.begin(), aligned_mask_.end(), true));
}

std::vector<std::string> ParallelVocabSet::language_tags() const {
  std::vector<std::string> tags;
  tags.reserve(languages_.size());
  for (const LanguageSpec& l : languages_) tags.push_back(l.tag);
  return tags;
}

std::vector<bool> ParallelVocabSet::character_slots() const {
  std::vector<bool> slots(size(), false);
  for (std::size_t i = char_region_.begin; i < char_region_.end && i < slots.size();
       ++i) {
    slots[i] = true;
  }
  return slots;
}

std::optional<std::size_t> ParallelVocabSet::find_code(std::string_view code) const {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i].code == code) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ParallelVocabSet::find_tag(std::string_view tag) const {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i].tag == tag) return i;
  }
  return std::nullopt;
}

void ParallelVocabSet::save(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  json manifest;
  manifest["format"] = "paratok-parallel-vocab";
  manifest["version"] = 1;
  manifest["pivot"] = pivot_;
  manifest["cap"] = config_.cap;
  manifest["char_subset"] = config_.char_subset;
  manifest["size"] = size();
  manifest["aligned_count"] = aligned_count();
  manifest["word_region"] = {word_region_.begin, word_region_.end};
  manifest["char_region"] = {char_region_.begin, char_region_.end};
  json langs = json::array();
  for (std::size_t l = 0; l < languages_.size(); ++l) {
    langs.push_back({{"code", languages_[l].code},
                     {"tag", languages_[l].tag},
                     {"vocab", "vocab." + languages_[l].code + ".txt"},
                     {"placeholder_filled", fill_[l].placeholder_filled},
                     {"appended", fill_[l].appended},
                     {"unused_placeholders", fill_[l].unused_placeholders}});
  }
  manifest["languages"] = std::move(langs);

  fs::path tmp = dir;
  tmp += ".tmp";
  std::error_code ec;
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp);
  write_file_atomic(tmp / "manifest.json", manifest.dump(2) + "\n");
  for (std::size_t l = 0; l < languages_.size(); ++l) {
    vocabs_[l].save(tmp / ("vocab." + languages_[l].code + ".txt"));
  }
  std::string mask;
  mask.reserve(aligned_mask_.size() * 2);
  for (bool b : aligned_mask_) {
    mask += b ? '1' : '0';
    mask += '\n';
  }
  write_file_atomic(tmp / "aligned.mask", mask);
  fs::remove_all(dir, ec);
  if (dir.has_parent_path()) fs::create_directories(dir.parent_path());
  fs::rename(tmp, dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIoError,
                "cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

ParallelVocabSet ParallelVocabSet::load(const std::filesystem::path& dir) {
  const std::string text = read_file(dir / "manifest.json");
  json manifest;
  try {
    manifest = json::parse(text);
    std::vector<LanguageSpec> languages;
    std::vector<Vocabulary> vocabs;
    std::vector<LanguageFill> fill;
    for (const json& l : manifest.at("languages")) {
      languages.push_back({l.at("code").get<std::string>(),
                           l.at("tag").get<std::string>()});
      vocabs.push_back(Vocabulary::load(dir / l.at("vocab").get<std::string>()));
      fill.push_back({l.value("placeholder_filled", std::size_t{0}),
                      l.value("appended", std::size_t{0}),
                      l.value("unused_placeholders", std::size_t{0})});
    }
    const std::string mask_text = read_file(dir / "aligned.mask");
    std::vector<bool> mask;
    for (char c : mask_text) {
      if (c == '0' || c == '1') {
        mask.push_back(c == '1');
      } else if (c != '\n' && c != '\r') {
        throw Error(ErrorKind::kInvalidFormat, "aligned.mask holds non 0/1 data");
      }
    }
    ParallelConfig config{manifest.at("cap").get<std::size_t>(),
                          manifest.at("char_subset").get<std::size_t>()};
    const auto wr = manifest.at("word_region").get<std::vector<std::size_t>>();
    const auto cr = manifest.at("char_region").get<std::vector<std::size_t>>();
    if (wr.size() != 2 || cr.size() != 2) {
      throw Error(ErrorKind::kInvalidFormat, "region must be [begin, end]");
    }
    ParallelVocabSet set(std::move(languages), manifest.at("pivot").get<std::string>(),
                         std::move(vocabs), std::move(mask), config,
                         {wr[0], wr[1]}, {cr[0], cr[1]}, std::move(fill));
    if (set.aligned_count() != manifest.at("aligned_count").get<std::size_t>()) {
      throw Error(ErrorKind::kInvalidFormat, "aligned_count disagrees with mask");
    }
    return set;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidFormat,
                (dir / "manifest.json").string() + ": " + e.what());
  }
}

namespace {

bool is_single_character(std::string_view token, std::string_view prefix) {
  if (token.substr(0, prefix.size()) == prefix && token.size() > prefix.size()) {
    token.remove_prefix(prefix.size());
  }
  return utf8::length(token) == 1;
}

}  // namespace

ParallelVocabSet build_parallel_set(
    const Vocabulary& pivot_vocab, std::span<const LanguageSpec> languages,
    std::string_view pivot, const std::map<std::string, BilingualLexicon>& lexicons,
    const std::map<std::string, Vocabulary>& mono_vocabs,
    const ParallelConfig& config) {
  const std::size_t k = languages.size();
  std::optional<std::size_t> pivot_idx;
  std::vector<std::string> tags;
  for (std::size_t l = 0; l < k; ++l) {
    if (languages[l].code == pivot) pivot_idx = l;
    tags.push_back(languages[l].tag);
  }
  if (!pivot_idx) {
    throw Error(ErrorKind::kValidation,
                "pivot '" + std::string(pivot) + "' not among languages");
  }
  std::vector<const Vocabulary*> monos(k, nullptr);
  std::vector<const BilingualLexicon*> lexes(k, nullptr);
  for (std::size_t l = 0; l < k; ++l) {
    const std::string& code = languages[l].code;
    auto mit = mono_vocabs.find(code);
    if (mit != mono_vocabs.end()) {
      monos[l] = &mit->second;
    } else if (l == *pivot_idx) {
      monos[l] = &pivot_vocab;
    } else {
      throw Error(ErrorKind::kMissingMonolingualVocab, code);
    }
    if (l == *pivot_idx) continue;
    auto lit = lexicons.find(code);
    if (lit == lexicons.end()) throw Error(ErrorKind::kMissingLexicon, code);
    lexes[l] = &lit->second;
  }

  const std::size_t fixed = kNumSpecialRoles + k;
  if (fixed > config.cap) {
    throw Error(ErrorKind::kCapExceededBySpecials,
                std::to_string(fixed) + " specials and language tags exceed cap " +
                    std::to_string(config.cap));
  }

  const std::string& prefix = pivot_vocab.continuation_prefix();
  std::vector<std::string> words = word_tokens(pivot_vocab, tags);
  words.resize(std::min(words.size(), config.cap - fixed));
  std::vector<std::string> chars;
  const std::size_t char_budget =
      std::min(config.char_subset, config.cap - fixed - words.size());
  for (const std::string& t : pivot_vocab.tokens()) {
    if (chars.size() >= char_budget) break;
    if (is_special_token(t) || !is_single_character(t, prefix)) continue;
    chars.push_back(t);
  }
  const IndexRange word_region{fixed, fixed + words.size()};
  const IndexRange char_region{word_region.end, word_region.end + chars.size()};

  // Per language: token per slot (empty = unaligned placeholder).
  std::vector<std::vector<std::string>> layouts(k);
  std::vector<std::vector<bool>> placed(k);
  std::vector<LanguageFill> fill(k);
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<std::string>& out = layouts[l];
    std::set<std::string, std::less<>> used;
    for (std::size_t r = 0; r < kNumSpecialRoles; ++r) {
      out.emplace_back(special_token(static_cast<SpecialRole>(r)));
    }
    out.insert(out.end(), tags.begin(), tags.end());
    used.insert(out.begin(), out.end());
    used.insert(chars.begin(), chars.end());
    placed[l].assign(words.size(), false);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::string token;
      if (l == *pivot_idx) {
        token = words[w];
      } else if (const LexiconEntry* e = lexes[l]->find(words[w]);
                 e && e->status == LexiconStatus::kAccepted &&
                 !used.contains(e->target)) {
        token = e->target;
      }
      if (!token.empty()) {
        used.insert(token);
        placed[l][w] = true;
      }
      out.push_back(std::move(token));
    }
    out.insert(out.end(), chars.begin(), chars.end());

    // Monolingual tokens fill unaligned word slots first, then extend the
    // vocabulary up to the cap.
    std::size_t next_slot = word_region.begin;
    auto advance_slot = [&] {
      while (next_slot < word_region.end && !out[next_slot].empty()) ++next_slot;
    };
    advance_slot();
    for (const std::string& t : monos[l]->tokens()) {
      if (next_slot >= word_region.end && out.size() >= config.cap) break;
      if (is_special_token(t) || is_placeholder_token(t) || used.contains(t) ||
          std::find(tags.begin(), tags.end(), t) != tags.end()) {
        continue;
      }
      used.insert(t);
      if (next_slot < word_region.end) {
        out[next_slot] = t;
        ++fill[l].placeholder_filled;
        advance_slot();
      } else {
        out.push_back(t);
        ++fill[l].appended;
      }
    }
    std::size_t unused = 0;
    for (std::size_t i = word_region.begin; i < word_region.end; ++i) {
      if (out[i].empty()) out[i] = placeholder_token(unused++);
    }
    fill[l].unused_placeholders = unused;
  }

  std::size_t size = config.cap;
  for (const auto& out : layouts) size = std::min(size, out.size());
  std::vector<Vocabulary> vocabs;
  vocabs.reserve(k);
  for (std::size_t l = 0; l < k; ++l) {
    if (layouts[l].size() > size) {
      fill[l].appended -= layouts[l].size() - size;
      layouts[l].resize(size);
    }
    vocabs.emplace_back(std::move(layouts[l]), prefix);
  }

  std::vector<bool> mask(size, false);
  for (std::size_t w = 0; w < words.size(); ++w) {
    bool all = true;
    for (std::size_t l = 0; l < k; ++l) all = all && placed[l][w];
    mask[word_region.begin + w] = all;
  }
  return ParallelVocabSet(std::vector<LanguageSpec>(languages.begin(), languages.end()),
                          std::string(pivot), std::move(vocabs), std::move(mask),
                          config, word_region, char_region, std::move(fill));
}

Encoding dispatch_encode(const ParallelVocabSet& set, std::string_view lang_token,
                         std::string_view text, const EncodeOptions& options) {
  const std::optional<std::size_t> lang = set.find_tag(lang_token);
  if (!lang) throw Error(ErrorKind::kUnknownLanguageToken, std::string(lang_token));
  Encoding enc = encode(set.vocab(*lang), text, options);
  enc.language_id = *lang;
  return enc;
}

AlignmentStats alignment_stats(const ParallelVocabSet& set) {
  AlignmentStats stats;
  stats.aligned = set.aligned_count();
  stats.size = set.size();
  stats.aligned_fraction =
      stats.size ? static_cast<double>(stats.aligned) / static_cast<double>(stats.size)
                 : 0.0;
  for (std::size_t l = 0; l < set.num_languages(); ++l) {
    stats.per_language_fill[set.languages()[l].code] = set.fill()[l];
  }
  return stats;
}

}  // namespace paratok
