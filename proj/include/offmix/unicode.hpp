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

#ifndef OFFMIX_UNICODE_HPP
#define OFFMIX_UNICODE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace offmix::unicode {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD, which
// is not a letter and therefore gets stripped downstream.
std::vector<char32_t> decode_utf8(std::string_view s);

std::string encode_utf8(const std::vector<char32_t>& cps);
void append_utf8(std::string& out, char32_t cp);

// Letter classification over a curated range table covering the scripts this
// pipeline encounters (Latin incl. extensions, Greek, Cyrillic, Armenian,
// Hebrew, Arabic, the major Indic scripts, kana, CJK, Hangul). Combining
// marks, digits, symbols, and emoji are not letters.
bool is_letter(char32_t cp);

// Whitespace for collapsing purposes: ASCII whitespace plus the Unicode
// space separators (NBSP, en/em spaces, ideographic space, line/para sep).
bool is_space(char32_t cp);

// Simple one-to-one lowercase mapping for the cased ranges in the letter
// table (ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic, Armenian).
// Uncased scripts map to themselves. For every letter cp, to_lower(cp) is a
// letter and a fixed point of to_lower.
char32_t to_lower(char32_t cp);

}  // namespace offmix::unicode

#endif  // OFFMIX_UNICODE_HPP
