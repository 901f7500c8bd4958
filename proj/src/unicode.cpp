// Copyright 2026 The offmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "offmix/unicode.hpp"

#include <algorithm>
#include <array>

namespace offmix::unicode {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Range {
  char32_t lo;
  char32_t hi;  // inclusive
};

// Letter ranges, sorted by lo. An approximation of the Unicode letter
// categories restricted to the scripts this tool meets; Indic vowel signs
// (Mc/Mn) and script-specific digits are deliberately outside.
constexpr std::array<Range, 60> kLetterRanges = {{
    {0x0041, 0x005A},  // A-Z
    {0x0061, 0x007A},  // a-z
    {0x00AA, 0x00AA},  // feminine ordinal
    {0x00B5, 0x00B5},  // micro sign
    {0x00BA, 0x00BA},  // masculine ordinal
    {0x00C0, 0x00D6},  // Latin-1 uppercase
    {0x00D8, 0x00F6},  // Latin-1 (times/divide excluded)
    {0x00F8, 0x02C1},  // Latin Ext-A/B, IPA, modifier letters
    {0x0370, 0x0374},  // Greek
    {0x0376, 0x0377},
    {0x037A, 0x037D},
    {0x037F, 0x037F},
    {0x0386, 0x0386},
    {0x0388, 0x03F5},
    {0x03F7, 0x0481},  // Greek tail + Cyrillic head
    {0x048A, 0x052F},  // Cyrillic + supplement
    {0x0531, 0x0556},  // Armenian uppercase
    {0x0560, 0x0588},  // Armenian lowercase
    {0x05D0, 0x05EA},  // Hebrew
    {0x0620, 0x064A},  // Arabic letters
    {0x066E, 0x066F},
    {0x0671, 0x06D3},
    {0x0904, 0x0939},  // Devanagari consonants/vowels
    {0x093D, 0x093D},
    {0x0950, 0x0950},
    {0x0958, 0x0961},
    {0x0971, 0x097F},
    {0x0985, 0x098C},  // Bengali
    {0x098F, 0x0990},
    {0x0993, 0x09A8},
    {0x09AA, 0x09B0},
    {0x09B2, 0x09B2},
    {0x09B6, 0x09B9},
    {0x09BD, 0x09BD},
    {0x09CE, 0x09CE},
    {0x09DC, 0x09DD},
    {0x09DF, 0x09E1},
    {0x09F0, 0x09F1},
    {0x0B85, 0x0B8A},  // Tamil
    {0x0B8E, 0x0B90},
    {0x0B92, 0x0B95},
    {0x0B99, 0x0B9A},
    {0x0B9C, 0x0B9C},
    {0x0B9E, 0x0B9F},
    {0x0BA3, 0x0BA4},
    {0x0BA8, 0x0BAA},
    {0x0BAE, 0x0BB9},
    {0x0BD0, 0x0BD0},
    {0x0C05, 0x0C39},  // Telugu (letters; signs live above 0x0C3D)
    {0x0C58, 0x0C61},
    {0x0C85, 0x0CB9},  // Kannada
    {0x0CE0, 0x0CE1},
    {0x0D04, 0x0D3A},  // Malayalam
    {0x0D4E, 0x0D4E},
    {0x0D54, 0x0D56},
    {0x0D5F, 0x0D61},
    {0x0D7A, 0x0D7F},
    {0x3041, 0x30FF},  // kana
    {0x4E00, 0x9FFF},  // CJK unified
    {0xAC00, 0xD7A3},  // Hangul syllables
}};

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(len) > n) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    char32_t acc = cp;
    for (int k = 1; k < len; ++k) {
      unsigned char b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      acc = (acc << 6) | (b & 0x3F);
    }
    // Reject overlong encodings, surrogates, and out-of-range values.
    if (ok) {
      if ((len == 2 && acc < 0x80) || (len == 3 && acc < 0x800) ||
          (len == 4 && acc < 0x10000) || acc > 0x10FFFF ||
          (acc >= 0xD800 && acc <= 0xDFFF))
        ok = false;
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
    } else {
      out.push_back(acc);
      i += static_cast<std::size_t>(len);
    }
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

bool is_letter(char32_t cp) {
  auto it = std::upper_bound(
      kLetterRanges.begin(), kLetterRanges.end(), cp,
      [](char32_t v, const Range& r) { return v < r.lo; });
  if (it == kLetterRanges.begin()) return false;
  --it;
  return cp <= it->hi;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case 0x0B:
    case 0x0C:
    case 0x00A0:  // NBSP
    case 0x1680:
    case 0x2028:  // line separator
    case 0x2029:  // paragraph separator
    case 0x202F:
    case 0x205F:
    case 0x3000:  // ideographic space
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  if (cp == 0x0179 || cp == 0x017B || cp == 0x017D) return cp + 1;
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
  if (cp >= 0x0391 && cp <= 0x03A1) return cp + 0x20;
  if (cp >= 0x03A3 && cp <= 0x03AB) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x0460 && cp <= 0x0481) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x048A && cp <= 0x04BF) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x04C1 && cp <= 0x04CE) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x04D0 && cp <= 0x052F) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0531 && cp <= 0x0556) return cp + 0x30;
  return cp;
}

}  // namespace offmix::unicode
