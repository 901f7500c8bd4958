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

#include "offmix/token_sequence.hpp"

#include "offmix/error.hpp"

namespace offmix {

namespace {

constexpr std::size_t kMaxWordBytes = 200;

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) words.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

}  // namespace

std::vector<TokenId> wordpiece_split(const std::string& word,
                                     const Vocab& vocab) {
  if (word.empty() || word.size() > kMaxWordBytes)
    return {vocab.unk_id()};
  std::vector<TokenId> pieces;
  std::size_t start = 0;
  while (start < word.size()) {
    std::size_t end = word.size();
    TokenId found = -1;
    while (end > start) {
      std::string piece = word.substr(start, end - start);
      if (start > 0) piece = "##" + piece;
      found = vocab.find(piece);
      if (found >= 0) break;
      // Back off one code point, not one byte, so pieces stay valid UTF-8.
      --end;
      while (end > start &&
             (static_cast<unsigned char>(word[end]) & 0xC0) == 0x80)
        --end;
    }
    if (found < 0) return {vocab.unk_id()};
    pieces.push_back(found);
    start = end;
  }
  return pieces;
}

TokenSequence tokenize(const CleanText& text, const Vocab& vocab,
                       int max_len) {
  if (max_len < 2)
    throw_usage("max_len must be at least 2 (room for [CLS] and [SEP])");

  std::vector<TokenId> subwords;
  for (const std::string& word : split_words(text.value)) {
    std::vector<TokenId> pieces = wordpiece_split(word, vocab);
    subwords.insert(subwords.end(), pieces.begin(), pieces.end());
  }
  const std::size_t budget = static_cast<std::size_t>(max_len) - 2;
  if (subwords.size() > budget) subwords.resize(budget);

  TokenSequence seq;
  seq.max_len = max_len;
  seq.ids.reserve(static_cast<std::size_t>(max_len));
  seq.ids.push_back(vocab.cls_id());
  seq.ids.insert(seq.ids.end(), subwords.begin(), subwords.end());
  seq.ids.push_back(vocab.sep_id());
  const std::size_t real = seq.ids.size();
  seq.ids.resize(static_cast<std::size_t>(max_len), vocab.pad_id());
  seq.mask.assign(static_cast<std::size_t>(max_len), 0);
  for (std::size_t i = 0; i < real; ++i) seq.mask[i] = 1;
  return seq;
}

}  // namespace offmix
