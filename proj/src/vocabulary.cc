#include "paratok/vocabulary.h"

#include <fstream>
#include <sstream>
#include <system_error>

#include "paratok/error.h"

namespace paratok {

namespace {

constexpr std::array<std::string_view, kNumSpecialRoles> kSpecialTokens = {
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};

}  // namespace

std::string_view special_token(SpecialRole role) {
  return kSpecialTokens[static_cast<std::size_t>(role)];
}

bool is_special_token(std::string_view token) {
  for (std::string_view s : kSpecialTokens) {
    if (s == token) return true;
  }
  return false;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::string continuation_prefix)
    : tokens_(std::move(tokens)), prefix_(std::move(continuation_prefix)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) {
      throw Error(ErrorKind::kInvalidFormat,
                  "empty token at index " + std::to_string(i));
    }
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw Error(ErrorKind::kInvalidFormat,
                  "duplicate token '" + tokens_[i] + "' at index " +
                      std::to_string(i));
    }
  }
  for (std::size_t r = 0; r < kNumSpecialRoles; ++r) {
    auto it = index_.find(kSpecialTokens[r]);
    if (it == index_.end()) {
      throw Error(ErrorKind::kInvalidFormat, "vocabulary lacks special token " +
                                                 std::string(kSpecialTokens[r]));
    }
    special_ids_[r] = it->second;
  }
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "id " + std::to_string(id) + " outside vocabulary of size " +
                    std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::is_special_id(TokenId id) const {
  for (TokenId s : special_ids_) {
    if (s == id) return true;
  }
  return false;
}

bool Vocabulary::is_continuation(std::string_view token) const {
  return !prefix_.empty() && token.size() > prefix_.size() &&
         token.substr(0, prefix_.size()) == prefix_;
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const std::string& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  write_file_atomic(path, serialize());
}

Vocabulary Vocabulary::parse(std::string_view contents) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    tokens.emplace_back(line);
    start = end + 1;
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIoError, "cannot write " + tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorKind::kIoError,
                "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::kFileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace paratok
