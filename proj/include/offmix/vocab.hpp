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

#ifndef OFFMIX_VOCAB_HPP
#define OFFMIX_VOCAB_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace offmix {

using TokenId = std::int32_t;

// Subword vocabulary with the usual sentinel tokens. Word-internal
// continuation pieces carry the "##" prefix.
class Vocab {
 public:
  static constexpr const char* kPad = "[PAD]";
  static constexpr const char* kUnk = "[UNK]";
  static constexpr const char* kCls = "[CLS]";
  static constexpr const char* kSep = "[SEP]";

  // One token per line, id = line index. All four sentinels must be present.
  static Vocab load(const std::filesystem::path& path);

  // Built from an explicit token list (sentinels included); used by tests and
  // by model artifacts that embed their vocabulary.
  static Vocab from_tokens(std::vector<std::string> tokens);

  // Fallback vocabulary: sentinels, a-z, and ##a-##z. Tokenizes any
  // lowercase-Latin CleanText without [UNK].
  static Vocab basic_latin();

  TokenId pad_id() const { return pad_id_; }
  TokenId unk_id() const { return unk_id_; }
  TokenId cls_id() const { return cls_id_; }
  TokenId sep_id() const { return sep_id_; }

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // -1 when absent.
  TokenId find(const std::string& token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId pad_id_ = -1, unk_id_ = -1, cls_id_ = -1, sep_id_ = -1;

  void build_index();
};

}  // namespace offmix

#endif  // OFFMIX_VOCAB_HPP
