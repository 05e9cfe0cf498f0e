#ifndef PARATOK_VOCABULARY_H_
#define PARATOK_VOCABULARY_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace paratok {

using TokenId = std::int32_t;

inline constexpr std::size_t kDefaultVocabCap = 30522;
inline constexpr std::string_view kContinuationPrefix = "##";

enum class SpecialRole { kPad = 0, kUnk, kCls, kSep, kMask };
inline constexpr std::size_t kNumSpecialRoles = 5;

// Literal surface form of a special role, e.g. "[UNK]".
std::string_view special_token(SpecialRole role);
bool is_special_token(std::string_view token);

// Ordered token list where a token's index is its id. The five special roles
// are always present. Immutable once constructed.
class Vocabulary {
 public:
  // Throws InvalidFormat on duplicate tokens, empty tokens, or missing
  // special roles.
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::string continuation_prefix =
                          std::string(kContinuationPrefix));

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& continuation_prefix() const { return prefix_; }

  // Throws IndexOutOfRange.
  const std::string& token(TokenId id) const;
  std::optional<TokenId> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }

  TokenId special_id(SpecialRole role) const {
    return special_ids_[static_cast<std::size_t>(role)];
  }
  TokenId unk_id() const { return special_id(SpecialRole::kUnk); }
  bool is_special_id(TokenId id) const;
  bool is_continuation(std::string_view token) const;

  // One token per line, line number = id.
  void save(const std::filesystem::path& path) const;
  std::string serialize() const;
  static Vocabulary load(const std::filesystem::path& path);
  static Vocabulary parse(std::string_view contents);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.prefix_ == b.prefix_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> tokens_;
  std::string prefix_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> index_;
  std::array<TokenId, kNumSpecialRoles> special_ids_{};
};

// Writes `contents` to a sibling temp file then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace paratok

#endif  // PARATOK_VOCABULARY_H_
