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

#ifndef OFFMIX_EMBEDDING_CACHE_HPP
#define OFFMIX_EMBEDDING_CACHE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "offmix/encoder.hpp"

namespace offmix {

// On-disk embedding cache:
//   magic "EMB1",
//   u32 count, u32 dim (little-endian),
//   count*dim little-endian IEEE-754 f32 in record order,
//   count newline-terminated UTF-8 ids.
struct EmbeddingCache {
  std::vector<std::string> ids;
  EmbeddingMatrix embeddings;  // dim x count

  std::size_t count() const { return ids.size(); }
  int dim() const { return static_cast<int>(embeddings.rows()); }
};

void write_cache(const EmbeddingCache& cache, const std::filesystem::path& path);
EmbeddingCache read_cache(const std::filesystem::path& path);

}  // namespace offmix

#endif  // OFFMIX_EMBEDDING_CACHE_HPP
