#include "paratok/wordpiece.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "paratok/error.h"
#include "paratok/utf8.h"

namespace paratok {

std::size_t Encoding::content_size() const {
  std::size_t n = 0;
  for (const WordSpan& span : word_spans) n += span.end - span.begin;
  return n;
}

namespace {

template <typename T>
void append_json_array(std::string& out, const std::vector<T>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(static_cast<long long>(values[i]));
  }
  out += ']';
}

}  // namespace

std::string Encoding::to_json() const {
  std::string out = "{\"ids\":";
  append_json_array(out, ids);
  out += ",\"attention_mask\":";
  append_json_array(out, attention_mask);
  out += ",\"type_ids\":";
  append_json_array(out, type_ids);
  out += ",\"language_id\":";
  out += std::to_string(language_id);
  out += '}';
  return out;
}

std::optional<std::vector<TokenId>> segment_word(const Vocabulary& vocab,
                                                 std::string_view word,
                                                 bool as_continuation) {
  const std::u32string cps = utf8::to_u32(word);
  const std::string& prefix = vocab.continuation_prefix();
  std::vector<TokenId> pieces;
  std::size_t start = 0;
  std::string candidate;
  while (start < cps.size()) {
    std::size_t end = cps.size();
    std::optional<TokenId> match;
    while (start < end) {
      candidate.clear();
      if (start > 0 || as_continuation) candidate = prefix;
      for (std::size_t i = start; i < end; ++i) utf8::append(candidate, cps[i]);
      match = vocab.find(candidate);
      if (match) break;
      --end;
    }
    if (!match) return std::nullopt;
    pieces.push_back(*match);
    start = end;
  }
  return pieces;
}

Encoding encode(const Vocabulary& vocab, std::string_view text,
                const EncodeOptions& options) {
  Encoding enc;
  enc.ids.push_back(vocab.special_id(SpecialRole::kCls));
  const std::string normalized =
      options.lowercase ? utf8::to_lower(text) : std::string(text);
  const std::vector<std::string> words = utf8::split_whitespace(normalized);
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::size_t begin = enc.ids.size();
    std::optional<std::vector<TokenId>> pieces;
    if (utf8::length(words[w]) <= options.max_word_length) {
      pieces = segment_word(vocab, words[w]);
    }
    if (pieces) {
      enc.ids.insert(enc.ids.end(), pieces->begin(), pieces->end());
    } else {
      enc.ids.push_back(vocab.unk_id());
    }
    enc.word_spans.push_back({w, begin, enc.ids.size()});
  }
  enc.ids.push_back(vocab.special_id(SpecialRole::kSep));
  enc.attention_mask.assign(enc.ids.size(), 1);
  enc.type_ids.assign(enc.ids.size(), 0);
  return enc;
}

std::string decode(const Vocabulary& vocab, std::span<const TokenId> ids) {
  std::string out;
  const std::size_t prefix_len = vocab.continuation_prefix().size();
  for (TokenId id : ids) {
    const std::string& token = vocab.token(id);
    if (vocab.is_special_id(id)) continue;
    if (vocab.is_continuation(token)) {
      out.append(token, prefix_len);
    } else {
      if (!out.empty()) out += ' ';
      out += token;
    }
  }
  return out;
}

namespace {

// Strictly better merge candidate: higher score, then lexicographically
// smaller (left, right).
bool better_pair(std::uint64_t count_a, std::uint64_t left_a,
                 std::uint64_t right_a, std::string_view left_str_a,
                 std::string_view right_str_a, std::uint64_t count_b,
                 std::uint64_t left_b, std::uint64_t right_b,
                 std::string_view left_str_b, std::string_view right_str_b) {
  using U128 = unsigned __int128;
  const U128 lhs = static_cast<U128>(count_a) * left_b * right_b;
  const U128 rhs = static_cast<U128>(count_b) * left_a * right_a;
  if (lhs != rhs) return lhs > rhs;
  if (left_str_a != left_str_b) return left_str_a < left_str_b;
  return right_str_a < right_str_b;
}

}  // namespace

Vocabulary train_wordpiece(std::span<const std::string> corpus,
                           const TrainerConfig& config) {
  std::map<std::string, std::uint64_t> word_counts;
  for (const std::string& line : corpus) {
    const std::string text = config.lowercase ? utf8::to_lower(line) : line;
    for (std::string& word : utf8::split_whitespace(text)) {
      if (utf8::length(word) > config.max_word_length) continue;
      ++word_counts[std::move(word)];
    }
  }
  if (word_counts.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "corpus has no non-empty line");
  }

  std::set<char32_t> alphabet;
  std::vector<std::pair<std::u32string, std::uint64_t>> words;
  words.reserve(word_counts.size());
  for (const auto& [word, count] : word_counts) {
    std::u32string cps = utf8::to_u32(word);
    alphabet.insert(cps.begin(), cps.end());
    words.emplace_back(std::move(cps), count);
  }
  const std::size_t initial = kNumSpecialRoles + 2 * alphabet.size();
  if (config.vocab_cap < initial) {
    throw Error(ErrorKind::kCapTooSmall,
                "cap " + std::to_string(config.vocab_cap) +
                    " cannot hold specials plus " +
                    std::to_string(2 * alphabet.size()) + " alphabet entries");
  }

  const std::string prefix(kContinuationPrefix);
  std::vector<std::string> tokens;
  std::unordered_map<std::string, std::uint32_t> token_index;
  auto add_token = [&](std::string token) -> std::uint32_t {
    auto it = token_index.find(token);
    if (it != token_index.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(tokens.size());
    token_index.emplace(token, id);
    tokens.push_back(std::move(token));
    return id;
  };
  for (std::size_t r = 0; r < kNumSpecialRoles; ++r) {
    add_token(std::string(special_token(static_cast<SpecialRole>(r))));
  }
  for (char32_t cp : alphabet) add_token(utf8::encode(std::u32string(1, cp)));
  for (char32_t cp : alphabet) {
    add_token(prefix + utf8::encode(std::u32string(1, cp)));
  }

  // Each word as a sequence of token ids with its corpus frequency.
  std::vector<std::vector<std::uint32_t>> pieces(words.size());
  std::vector<std::uint64_t> freqs(words.size());
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::u32string& cps = words[w].first;
    freqs[w] = words[w].second;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      std::string piece = i == 0 ? std::string() : prefix;
      utf8::append(piece, cps[i]);
      pieces[w].push_back(token_index.at(piece));
    }
  }

  const std::uint64_t min_freq = std::max<std::size_t>(config.min_pair_frequency, 1);
  while (tokens.size() < config.vocab_cap) {
    std::vector<std::uint64_t> piece_counts(tokens.size(), 0);
    std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
    for (std::size_t w = 0; w < pieces.size(); ++w) {
      const auto& seq = pieces[w];
      for (std::size_t i = 0; i < seq.size(); ++i) {
        piece_counts[seq[i]] += freqs[w];
        if (i + 1 < seq.size()) {
          pair_counts[(static_cast<std::uint64_t>(seq[i]) << 32) | seq[i + 1]] +=
              freqs[w];
        }
      }
    }
    bool found = false;
    std::uint64_t best_key = 0, best_count = 0;
    for (const auto& [key, count] : pair_counts) {
      if (count < min_freq) continue;
      const auto left = static_cast<std::uint32_t>(key >> 32);
      const auto right = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
      if (!found) {
        found = true;
        best_key = key;
        best_count = count;
        continue;
      }
      const auto best_left = static_cast<std::uint32_t>(best_key >> 32);
      const auto best_right = static_cast<std::uint32_t>(best_key & 0xFFFFFFFFu);
      if (better_pair(count, piece_counts[left], piece_counts[right],
                      tokens[left], tokens[right], best_count,
                      piece_counts[best_left], piece_counts[best_right],
                      tokens[best_left], tokens[best_right])) {
        best_key = key;
        best_count = count;
      }
    }
    if (!found) break;

    const auto left = static_cast<std::uint32_t>(best_key >> 32);
    const auto right = static_cast<std::uint32_t>(best_key & 0xFFFFFFFFu);
    std::string merged = tokens[left] + tokens[right].substr(prefix.size());
    const std::uint32_t merged_id = add_token(std::move(merged));
    for (auto& seq : pieces) {
      if (seq.size() < 2) continue;
      std::vector<std::uint32_t> next;
      next.reserve(seq.size());
      for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
          next.push_back(merged_id);
          ++i;
        } else {
          next.push_back(seq[i]);
        }
      }
      seq = std::move(next);
    }
  }
  return Vocabulary(std::move(tokens));
}

}  // namespace paratok
