#ifndef PARATOK_WORDPIECE_H_
#define PARATOK_WORDPIECE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paratok/vocabulary.h"

namespace paratok {

inline constexpr std::size_t kMaxInputWordLength = 100;

// Ids of one whitespace word, as the half-open range [begin, end) into
// Encoding::ids.
struct WordSpan {
  std::size_t word_index = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const WordSpan&, const WordSpan&) = default;
};

struct Encoding {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> attention_mask;
  std::vector<std::uint8_t> type_ids;
  std::size_t language_id = 0;
  std::vector<WordSpan> word_spans;

  // Number of ids excluding the CLS/SEP frame.
  std::size_t content_size() const;

  // {"ids":[...],"attention_mask":[...],"type_ids":[...],"language_id":n}
  std::string to_json() const;

  friend bool operator==(const Encoding&, const Encoding&) = default;
};

struct EncodeOptions {
  bool lowercase = true;
  std::size_t max_word_length = kMaxInputWordLength;
};

// Greedy longest-match-first segmentation of a single word. Continuation
// pieces carry the vocabulary prefix. Returns nullopt when some remainder
// has no match. With `as_continuation`, the first piece is prefixed too.
std::optional<std::vector<TokenId>> segment_word(const Vocabulary& vocab,
                                                 std::string_view word,
                                                 bool as_continuation = false);

Encoding encode(const Vocabulary& vocab, std::string_view text,
                const EncodeOptions& options = {});

// Drops special ids and rejoins pieces. Throws IndexOutOfRange.
std::string decode(const Vocabulary& vocab, std::span<const TokenId> ids);

struct TrainerConfig {
  std::size_t vocab_cap = kDefaultVocabCap;
  std::size_t min_pair_frequency = 2;
  bool lowercase = true;
  std::size_t max_word_length = kMaxInputWordLength;
};

// Trains a WordPiece vocabulary. The initial alphabet holds every character
// seen in the corpus in both word-initial and continuation form; merges are
// scored count(ab) / (count(a) * count(b)).
// Throws EmptyCorpus and CapTooSmall.
Vocabulary train_wordpiece(std::span<const std::string> corpus,
                           const TrainerConfig& config = {});

}  // namespace paratok

#endif  // PARATOK_WORDPIECE_H_
