#ifndef PARATOK_UTF8_H_
#define PARATOK_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace paratok::utf8 {

inline constexpr char32_t kReplacementChar = 0xFFFD;

struct DecodeResult {
  std::u32string code_points;
  std::size_t invalid_bytes = 0;  // bytes consumed by replaced sequences
};

// Decodes UTF-8, substituting U+FFFD for every maximal invalid subsequence.
DecodeResult decode(std::string_view text);
std::u32string to_u32(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view code_points);

// Number of Unicode scalar values.
std::size_t length(std::string_view text);

bool is_whitespace(char32_t cp);
bool is_control(char32_t cp);
bool is_decimal_digit(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view text);

// Splits on Unicode whitespace; empty pieces are dropped.
std::vector<std::string> split_whitespace(std::string_view text);

enum class Script {
  kCommon,
  kInherited,
  kLatin,
  kGreek,
  kCyrillic,
  kArmenian,
  kHebrew,
  kArabic,
  kDevanagari,
  kBengali,
  kThai,
  kGeorgian,
  kHangul,
  kEthiopic,
  kHiragana,
  kKatakana,
  kHan,
  kUnknown,
};

Script script_of(char32_t cp);
std::string_view script_name(Script script);

}  // namespace paratok::utf8

#endif  // PARATOK_UTF8_H_
