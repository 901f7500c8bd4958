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

#include "offmix/vocab.hpp"

#include <fstream>

#include "offmix/error.hpp"

namespace offmix {

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open vocabulary file: " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  // A trailing newline yields no extra entry with getline; an interior empty
  // line would, and empty tokens are never matchable.
  try {
    return from_tokens(std::move(tokens));
  } catch (const Error& e) {
    throw_data(std::string(e.what()) + " (in " + path.string() + ")");
  }
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  Vocab v;
  v.tokens_ = std::move(tokens);
  v.build_index();
  return v;
}

Vocab Vocab::basic_latin() {
  std::vector<std::string> tokens = {kPad, kUnk, kCls, kSep};
  for (char c = 'a'; c <= 'z'; ++c) tokens.push_back(std::string(1, c));
  for (char c = 'a'; c <= 'z'; ++c) tokens.push_back(std::string("##") + c);
  return from_tokens(std::move(tokens));
}

void Vocab::build_index() {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<TokenId>(i));
    if (!inserted)
      throw_data("duplicate vocabulary token \"" + tokens_[i] + "\" at ids " +
                 std::to_string(it->second) + " and " + std::to_string(i));
  }
  pad_id_ = find(kPad);
  unk_id_ = find(kUnk);
  cls_id_ = find(kCls);
  sep_id_ = find(kSep);
  if (pad_id_ < 0 || unk_id_ < 0 || cls_id_ < 0 || sep_id_ < 0)
    throw_data("vocabulary is missing one of the sentinel tokens "
               "[PAD]/[UNK]/[CLS]/[SEP]");
}

TokenId Vocab::find(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace offmix
