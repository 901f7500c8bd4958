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

#ifndef OFFMIX_TOKEN_SEQUENCE_HPP
#define OFFMIX_TOKEN_SEQUENCE_HPP

#include <cstdint>
#include <vector>

#include "offmix/textprep.hpp"
#include "offmix/vocab.hpp"

namespace offmix {

// Fixed-length token ids with an attention mask. Invariants:
//   - ids.size() == mask.size() == max_len,
//   - mask is a prefix of 1s followed by 0s,
//   - ids[0] is [CLS], the last masked position is [SEP],
//   - every mask-0 position holds [PAD].
struct TokenSequence {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> mask;
  int max_len = 0;

  // Number of masked (real) positions, including [CLS] and [SEP].
  int length() const {
    int n = 0;
    for (std::uint8_t m : mask) n += m;
    return n;
  }
};

// Greedy longest-match subword split of one space-free word; nullopt-free:
// a word with no full segmentation becomes a single [UNK].
std::vector<TokenId> wordpiece_split(const std::string& word, const Vocab& vocab);

// Subword-tokenizes `text`, wraps it in [CLS] ... [SEP], truncates so [SEP]
// is always retained, and pads to max_len. Requires max_len >= 2.
TokenSequence tokenize(const CleanText& text, const Vocab& vocab, int max_len);

}  // namespace offmix

#endif  // OFFMIX_TOKEN_SEQUENCE_HPP
