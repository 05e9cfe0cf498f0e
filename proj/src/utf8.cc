#include "paratok/utf8.h"

#include <array>
#include <utility>

namespace paratok::utf8 {

namespace {

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

}  // namespace

DecodeResult decode(std::string_view text) {
  DecodeResult result;
  result.code_points.reserve(text.size());
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char lead = bytes[i];
    if (lead < 0x80) {
      result.code_points.push_back(lead);
      ++i;
      continue;
    }
    std::size_t need = 0;
    char32_t cp = 0;
    unsigned char lo = 0x80, hi = 0xBF;
    if (lead >= 0xC2 && lead <= 0xDF) {
      need = 1;
      cp = lead & 0x1F;
    } else if (lead >= 0xE0 && lead <= 0xEF) {
      need = 2;
      cp = lead & 0x0F;
      if (lead == 0xE0) lo = 0xA0;
      if (lead == 0xED) hi = 0x9F;
    } else if (lead >= 0xF0 && lead <= 0xF4) {
      need = 3;
      cp = lead & 0x07;
      if (lead == 0xF0) lo = 0x90;
      if (lead == 0xF4) hi = 0x8F;
    } else {
      result.code_points.push_back(kReplacementChar);
      ++result.invalid_bytes;
      ++i;
      continue;
    }
    std::size_t consumed = 1;
    bool ok = true;
    for (std::size_t k = 0; k < need; ++k) {
      if (i + consumed >= n) {
        ok = false;
        break;
      }
      const unsigned char b = bytes[i + consumed];
      const unsigned char blo = k == 0 ? lo : 0x80;
      const unsigned char bhi = k == 0 ? hi : 0xBF;
      if (b < blo || b > bhi) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
      ++consumed;
    }
    if (ok) {
      result.code_points.push_back(cp);
    } else {
      result.code_points.push_back(kReplacementChar);
      result.invalid_bytes += consumed;
    }
    i += consumed;
  }
  return result;
}

std::u32string to_u32(std::string_view text) { return decode(text).code_points; }

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t cp : code_points) append(out, cp);
  return out;
}

std::size_t length(std::string_view text) {
  std::size_t count = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

bool is_whitespace(char32_t cp) {
  return in(cp, 0x09, 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || in(cp, 0x2000, 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_control(char32_t cp) {
  return cp < 0x20 || in(cp, 0x7F, 0x9F) || cp == 0x200B || cp == 0xFEFF ||
         cp == kReplacementChar || in(cp, 0xD800, 0xDFFF);
}

bool is_decimal_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
  if (cp == 0x130) return U'i';
  if (cp == 0x178) return 0xFF;
  if ((in(cp, 0x100, 0x137) || in(cp, 0x14A, 0x177)) && cp % 2 == 0) {
    return cp + 1;
  }
  if ((in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) && cp % 2 == 1) {
    return cp + 1;
  }
  // African Latin letters used by Hausa, Igbo, Twi and others.
  static constexpr std::array<std::pair<char32_t, char32_t>, 10> kExtended = {{
      {0x181, 0x253},  // Ɓ
      {0x186, 0x254},  // Ɔ
      {0x189, 0x256},  // Ɖ
      {0x18A, 0x257},  // Ɗ
      {0x18E, 0x1DD},  // Ǝ
      {0x190, 0x25B},  // Ɛ
      {0x198, 0x199},  // Ƙ
      {0x19D, 0x272},  // Ɲ
      {0x1B3, 0x1B4},  // Ƴ
      {0x14A, 0x14B},  // Ŋ
  }};
  for (const auto& [upper, lower] : kExtended) {
    if (cp == upper) return lower;
  }
  if (in(cp, 0x1E00, 0x1EFF) && cp % 2 == 0) return cp + 1;
  if (in(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 0x20;
  if (in(cp, 0x410, 0x42F)) return cp + 0x20;
  if (in(cp, 0x400, 0x40F)) return cp + 0x50;
  return cp;
}

std::string to_lower(std::string_view text) {
  std::u32string cps = to_u32(text);
  for (char32_t& cp : cps) cp = to_lower(cp);
  return encode(cps);
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> words;
  const std::u32string cps = to_u32(text);
  std::string current;
  for (char32_t cp : cps) {
    if (is_whitespace(cp)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      append(current, cp);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

Script script_of(char32_t cp) {
  struct Range {
    char32_t lo, hi;
    Script script;
  };
  static constexpr Range kRanges[] = {
      {0x0041, 0x005A, Script::kLatin},     {0x0061, 0x007A, Script::kLatin},
      {0x00AA, 0x00AA, Script::kLatin},     {0x00BA, 0x00BA, Script::kLatin},
      {0x00C0, 0x00D6, Script::kLatin},     {0x00D8, 0x00F6, Script::kLatin},
      {0x00F8, 0x02AF, Script::kLatin},     {0x02B0, 0x02FF, Script::kCommon},
      {0x0300, 0x036F, Script::kInherited}, {0x0370, 0x03FF, Script::kGreek},
      {0x0400, 0x052F, Script::kCyrillic},  {0x0530, 0x058F, Script::kArmenian},
      {0x0590, 0x05FF, Script::kHebrew},    {0x0600, 0x06FF, Script::kArabic},
      {0x0750, 0x077F, Script::kArabic},    {0x0900, 0x097F, Script::kDevanagari},
      {0x0980, 0x09FF, Script::kBengali},   {0x0E00, 0x0E7F, Script::kThai},
      {0x10A0, 0x10FF, Script::kGeorgian},  {0x1100, 0x11FF, Script::kHangul},
      {0x1200, 0x139F, Script::kEthiopic},  {0x1AB0, 0x1AFF, Script::kInherited},
      {0x1D00, 0x1D7F, Script::kLatin},     {0x1DC0, 0x1DFF, Script::kInherited},
      {0x1E00, 0x1EFF, Script::kLatin},     {0x1F00, 0x1FFF, Script::kGreek},
      {0x2000, 0x2BFF, Script::kCommon},    {0x2C60, 0x2C7F, Script::kLatin},
      {0x2D80, 0x2DDF, Script::kEthiopic},  {0x2E00, 0x2E7F, Script::kCommon},
      {0x3000, 0x303F, Script::kCommon},    {0x3040, 0x309F, Script::kHiragana},
      {0x30A0, 0x30FF, Script::kKatakana},  {0x3400, 0x4DBF, Script::kHan},
      {0x4E00, 0x9FFF, Script::kHan},       {0xA720, 0xA7FF, Script::kLatin},
      {0xAB00, 0xAB2F, Script::kEthiopic},  {0xAC00, 0xD7AF, Script::kHangul},
      {0xFE00, 0xFE0F, Script::kInherited}, {0xFF01, 0xFF20, Script::kCommon},
      {0xFF21, 0xFF3A, Script::kLatin},     {0xFF41, 0xFF5A, Script::kLatin},
      {0x1F000, 0x1FAFF, Script::kCommon},
  };
  for (const Range& r : kRanges) {
    if (cp >= r.lo && cp <= r.hi) return r.script;
  }
  if (cp < 0x100) return Script::kCommon;
  return Script::kUnknown;
}

std::string_view script_name(Script script) {
  switch (script) {
    case Script::kCommon: return "Common";
    case Script::kInherited: return "Inherited";
    case Script::kLatin: return "Latin";
    case Script::kGreek: return "Greek";
    case Script::kCyrillic: return "Cyrillic";
    case Script::kArmenian: return "Armenian";
    case Script::kHebrew: return "Hebrew";
    case Script::kArabic: return "Arabic";
    case Script::kDevanagari: return "Devanagari";
    case Script::kBengali: return "Bengali";
    case Script::kThai: return "Thai";
    case Script::kGeorgian: return "Georgian";
    case Script::kHangul: return "Hangul";
    case Script::kEthiopic: return "Ethiopic";
    case Script::kHiragana: return "Hiragana";
    case Script::kKatakana: return "Katakana";
    case Script::kHan: return "Han";
    case Script::kUnknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace paratok::utf8
