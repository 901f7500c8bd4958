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

#include "offmix/textprep.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "offmix/error.hpp"
#include "offmix/unicode.hpp"

namespace offmix {

namespace {

// The URL and handle patterns are pure ASCII, so they can run on the raw
// UTF-8 bytes: multi-byte sequences never collide with ASCII literals, and
// \S simply eats continuation bytes as part of the match.
const std::regex& url_pattern() {
  static const std::regex re(R"((https?://|www\.)\S+)", std::regex::icase);
  return re;
}

const std::regex& handle_pattern() {
  static const std::regex re(R"(@\w+)");
  return re;
}

bool token_is_lower_letters(const std::string& s) {
  if (s.empty()) return false;
  for (char32_t cp : unicode::decode_utf8(s)) {
    if (!unicode::is_letter(cp) || unicode::to_lower(cp) != cp) return false;
  }
  return true;
}

std::vector<std::string> split_on_spaces(const std::string& s) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) tokens.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

}  // namespace

bool is_clean(const std::string& s) {
  if (s.empty()) return true;
  auto cps = unicode::decode_utf8(s);
  if (cps.front() == U' ' || cps.back() == U' ') return false;
  bool prev_space = false;
  for (char32_t cp : cps) {
    if (cp == U' ') {
      if (prev_space) return false;
      prev_space = true;
      continue;
    }
    prev_space = false;
    if (!unicode::is_letter(cp)) return false;
    if (unicode::to_lower(cp) != cp) return false;
  }
  return true;
}

LemmaLexicon LemmaLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open lexicon file: " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw_data("lexicon line " + std::to_string(line_no) + " in " +
                 path.string() + " has no tab separator");
    entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  try {
    return from_entries(entries);
  } catch (const Error& e) {
    throw_data(std::string(e.what()) + " (in " + path.string() + ")");
  }
}

LemmaLexicon LemmaLexicon::from_entries(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  LemmaLexicon lex;
  for (const auto& [key, value] : entries) {
    if (!token_is_lower_letters(key) || !token_is_lower_letters(value))
      throw_data("lexicon entry \"" + key + "\" -> \"" + value +
                 "\" is not a lowercase letters-only token pair");
    auto [it, inserted] = lex.entries_.emplace(key, value);
    if (!inserted && it->second != value)
      throw_data("lexicon maps \"" + key + "\" to both \"" + it->second +
                 "\" and \"" + value + "\"");
  }
  // Every value must be a fixed point, else lemmatization would not be
  // idempotent.
  for (const auto& [key, value] : lex.entries_) {
    auto it = lex.entries_.find(value);
    if (it != lex.entries_.end() && it->second != value)
      throw_data("lexicon value \"" + value + "\" is itself remapped to \"" +
                 it->second + "\"; values must be fixed points");
  }
  return lex;
}

const std::string& LemmaLexicon::lookup(const std::string& token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? token : it->second;
}

bool LemmaLexicon::contains(const std::string& token) const {
  return entries_.find(token) != entries_.end();
}

std::string strip_noise(const std::string& text) {
  std::string no_urls = std::regex_replace(text, url_pattern(), " ");
  std::string no_handles = std::regex_replace(no_urls, handle_pattern(), " ");

  auto cps = unicode::decode_utf8(no_handles);
  std::string out;
  out.reserve(no_handles.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (unicode::is_space(cp)) {
      pending_space = true;
      continue;
    }
    if (!unicode::is_letter(cp)) continue;
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    unicode::append_utf8(out, cp);
  }
  return out;
}

std::vector<std::string> lemmatize(const std::vector<std::string>& tokens,
                                   const LemmaLexicon& lexicon) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(lexicon.lookup(t));
  return out;
}

CleanText normalize(const std::string& text, const LemmaLexicon& lexicon) {
  std::string stripped = strip_noise(text);
  auto cps = unicode::decode_utf8(stripped);
  for (char32_t& cp : cps) cp = unicode::to_lower(cp);
  std::string lowered = unicode::encode_utf8(cps);

  std::vector<std::string> tokens = split_on_spaces(lowered);
  tokens = lemmatize(tokens, lexicon);

  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined += ' ';
    joined += tokens[i];
  }
  return CleanText{std::move(joined)};
}

}  // namespace offmix
