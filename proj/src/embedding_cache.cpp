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

#include "offmix/embedding_cache.hpp"

#include <fstream>
#include <limits>

#include "offmix/binio.hpp"
#include "offmix/error.hpp"

namespace offmix {

namespace {
constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
}  // namespace

void write_cache(const EmbeddingCache& cache,
                 const std::filesystem::path& path) {
  if (cache.embeddings.cols() != static_cast<Eigen::Index>(cache.ids.size()))
    throw_data("embedding cache has " + std::to_string(cache.ids.size()) +
               " ids but " + std::to_string(cache.embeddings.cols()) +
               " embedding columns");
  for (const std::string& id : cache.ids)
    if (id.empty() || id.find('\n') != std::string::npos ||
        id.find('\r') != std::string::npos)
      throw_data("embedding cache id is empty or contains a line break");

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw_data("cannot open embedding cache for writing: " + path.string());

  binio::put_magic(os, kMagic);
  binio::put_u32(os, static_cast<std::uint32_t>(cache.ids.size()));
  binio::put_u32(os, static_cast<std::uint32_t>(cache.embeddings.rows()));
  for (Eigen::Index c = 0; c < cache.embeddings.cols(); ++c)
    for (Eigen::Index r = 0; r < cache.embeddings.rows(); ++r)
      binio::put_f32(os, cache.embeddings(r, c));
  for (const std::string& id : cache.ids) os << id << '\n';
  if (!os) throw_data("failed writing embedding cache: " + path.string());
}

EmbeddingCache read_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw_data("cannot open embedding cache: " + path.string());

  binio::expect_magic(is, kMagic, "embedding cache");
  const std::uint32_t count = binio::get_u32(is, "embedding count");
  const std::uint32_t dim = binio::get_u32(is, "embedding dim");
  if (dim == 0 && count > 0)
    throw_data("embedding cache declares zero-dimensional embeddings");

  EmbeddingCache cache;
  cache.embeddings.resize(static_cast<Eigen::Index>(dim),
                          static_cast<Eigen::Index>(count));
  for (std::uint32_t c = 0; c < count; ++c)
    for (std::uint32_t r = 0; r < dim; ++r)
      cache.embeddings(static_cast<Eigen::Index>(r),
                       static_cast<Eigen::Index>(c)) =
          binio::get_f32(is, "embedding data");

  cache.ids.reserve(count);
  std::string line;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!std::getline(is, line))
      throw_data("embedding cache truncated: expected " +
                 std::to_string(count) + " ids, found " + std::to_string(i));
    if (line.empty())
      throw_data("embedding cache contains an empty id at index " +
                 std::to_string(i));
    cache.ids.push_back(line);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw_data("embedding cache has trailing bytes after the id block");
  return cache;
}

}  // namespace offmix
