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

#ifndef OFFMIX_TEXTPREP_HPP
#define OFFMIX_TEXTPREP_HPP

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace offmix {

// Normalized comment text. Invariants:
//   - only lowercase letters (per unicode::is_letter / unicode::to_lower)
//     separated by single ASCII spaces,
//   - no digits, URLs, or @handles,
//   - no leading/trailing whitespace, no double spaces.
// Construct via normalize(); the raw constructor is for deserializing text
// that already satisfies the invariants (checked in debug via is_clean).
struct CleanText {
  std::string value;

  bool operator==(const CleanText&) const = default;
};

// True iff `s` satisfies every CleanText invariant.
bool is_clean(const std::string& s);

// Inflected form -> base form lookup table. Keys and values are lowercase
// letters-only single tokens; every value is a fixed point (its own lookup
// is absent or identity), so lemmatization is idempotent.
class LemmaLexicon {
 public:
  LemmaLexicon() = default;

  // Two-column tab-delimited UTF-8 file: inflected TAB base. Lines starting
  // with '#' and blank lines are skipped. Throws a data error on entries
  // violating the invariants above.
  static LemmaLexicon load(const std::filesystem::path& path);

  // In-memory construction; validates the same invariants.
  static LemmaLexicon from_entries(
      const std::vector<std::pair<std::string, std::string>>& entries);

  // Returns the base form, or `token` itself when absent.
  const std::string& lookup(const std::string& token) const;
  bool contains(const std::string& token) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

// Deletes URLs (http(s):// or www. up to whitespace), then @handles, then
// every code point that is neither a letter nor whitespace; collapses
// whitespace runs to one space and trims. Case is preserved.
std::string strip_noise(const std::string& text);

// Replaces each token by its base form where the lexicon has one; length and
// order preserved. Tokens are expected lowercase.
std::vector<std::string> lemmatize(const std::vector<std::string>& tokens,
                                   const LemmaLexicon& lexicon);

// Full chain: strip_noise -> lowercase -> split on spaces -> lemmatize ->
// rejoin with single spaces. Idempotent.
CleanText normalize(const std::string& text, const LemmaLexicon& lexicon);

}  // namespace offmix

#endif  // OFFMIX_TEXTPREP_HPP
