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

#include "offmix/encoder.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "offmix/bert.hpp"
#include "offmix/embedding_cache.hpp"
#include "offmix/error.hpp"
#include "test_support.hpp"

namespace offmix {
namespace {

using testing::TempDir;

Vocab toy_vocab() {
  return Vocab::load(testing::source_root() / "data" / "toy" / "vocab.txt");
}

TokenSequence tok(const std::string& text, const Vocab& v, int max_len = 16) {
  return tokenize(CleanText{text}, v, max_len);
}

TEST_CASE("stub embeddings are deterministic and seed-sensitive") {
  const Vocab v = toy_vocab();
  const StubBackend a(32, 7, v), b(32, 7, v), c(32, 8, v);
  const TokenSequence seq = tok("semma padam", v);
  const Embedding ea = a.embed(seq);
  CHECK(ea == a.embed(seq));        // same instance, same call
  CHECK(ea == b.embed(seq));        // equal construction
  CHECK(ea != c.embed(seq));        // different seed
  CHECK(ea.size() == 32);
  for (int i = 0; i < ea.size(); ++i) CHECK(std::isfinite(ea[i]));
}

TEST_CASE("stub embedding is a function of the masked token multiset") {
  const Vocab v = toy_vocab();
  const StubBackend backend(64, 3, v);
  // Same words, different order: identical histogram, identical embedding.
  CHECK(backend.embed(tok("semma padam kidu", v)) ==
        backend.embed(tok("kidu semma padam", v)));
  // Padding length must not matter: mask excludes the [PAD] positions.
  CHECK(backend.embed(tok("semma padam", v, 8)) ==
        backend.embed(tok("semma padam", v, 32)));
  // One word changed or repeated -> different histogram.
  CHECK(backend.embed(tok("semma padam", v)) !=
        backend.embed(tok("semma pattu", v)));
  CHECK(backend.embed(tok("semma", v)) != backend.embed(tok("semma semma", v)));
}

TEST_CASE("an all-padding sequence is rejected") {
  const Vocab v = toy_vocab();
  const StubBackend backend(8, 1, v);
  TokenSequence seq;
  seq.max_len = 4;
  seq.ids.assign(4, v.pad_id());
  seq.mask.assign(4, 0);
  CHECK_THROWS_AS((void)backend.embed(seq), Error);
}

TEST_CASE("embed_corpus is order-preserving and batch-size invariant") {
  const Vocab v = toy_vocab();
  const StubBackend backend(16, 5, v);
  std::vector<CleanText> texts{CleanText{"semma padam"}, CleanText{"mokka"},
                               CleanText{"kidu kidu pattu"}, CleanText{"enna"},
                               CleanText{"adipoli cinema"}};
  const auto one = embed_corpus(texts, backend, 16, 1);
  const auto three = embed_corpus(texts, backend, 16, 3);
  const auto big = embed_corpus(texts, backend, 16, 64);
  REQUIRE(one.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CHECK(one[i] == three[i]);
    CHECK(one[i] == big[i]);
    CHECK(one[i] == backend.embed(tok(texts[i].value, v)));
  }
  CHECK(embed_corpus({}, backend, 16, 4).empty());
  CHECK_THROWS_AS((void)embed_corpus(texts, backend, 16, 0), Error);
}

TEST_CASE("make_backend wires up the stub from settings") {
  EncoderSettings settings;
  settings.kind = EncoderKind::deterministic_stub;
  settings.stub_dim = 24;
  settings.seed = 11;
  settings.vocab_path = testing::source_root() / "data" / "toy" / "vocab.txt";
  const auto backend = make_backend(settings);
  CHECK(backend->dim() == 24);
  CHECK(backend->kind() == EncoderKind::deterministic_stub);
  CHECK_FALSE(backend->fine_tunable());
  CHECK(backend->vocab().find("semma") >= 0);
}

TEST_CASE("pretrained backend demands a weights file, never falls back") {
  EncoderSettings settings;
  settings.kind = EncoderKind::pretrained_multilingual;
  SUBCASE("no path configured") {
    try {
      (void)make_backend(settings);
      FAIL("expected a backend error");
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::backend);
    }
  }
  SUBCASE("path does not exist") {
    settings.weights_path = "/nonexistent/weights.bin";
    CHECK_THROWS_AS((void)make_backend(settings), Error);
  }
}

TEST_CASE("pretrained backend embeds via the transformer") {
  TempDir dir;
  bert::Dims dims;
  dims.vocab_size = 52;  // must match the toy vocabulary exactly
  dims.hidden = 16;
  dims.layers = 1;
  dims.heads = 2;
  dims.intermediate = 32;
  dims.max_position = 32;
  const auto params = bert::random_params<float>(dims, 99);
  const auto weights = dir / "weights.bin";
  bert::save_params(params, weights);

  EncoderSettings settings;
  settings.kind = EncoderKind::pretrained_multilingual;
  settings.weights_path = weights;
  settings.vocab_path = testing::source_root() / "data" / "toy" / "vocab.txt";
  const auto backend = make_backend(settings);
  CHECK(backend->dim() == 16);
  CHECK(backend->fine_tunable());

  const TokenSequence seq = tok("semma padam", backend->vocab());
  const Embedding e = backend->embed(seq);
  REQUIRE(e.size() == 16);
  for (int i = 0; i < e.size(); ++i) REQUIRE(std::isfinite(e[i]));
  CHECK(e == backend->embed(seq));
}

TEST_CASE("pretrained backend rejects a vocabulary of the wrong size") {
  TempDir dir;
  bert::Dims dims;
  dims.vocab_size = 10;  // smaller than the toy vocabulary
  dims.hidden = 8;
  dims.layers = 1;
  dims.heads = 2;
  dims.intermediate = 16;
  dims.max_position = 16;
  bert::save_params(bert::random_params<float>(dims, 1), dir / "w.bin");
  EncoderSettings settings;
  settings.kind = EncoderKind::pretrained_multilingual;
  settings.weights_path = dir / "w.bin";
  settings.vocab_path = testing::source_root() / "data" / "toy" / "vocab.txt";
  try {
    (void)make_backend(settings);
    FAIL("expected a backend error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::backend);
  }
}

// ---------------------------------------------------------------------------
// Embedding cache format. The layout is decoded by hand here so the test
// pins the bytes, not just read_cache/write_cache symmetry:
//   "EMB1" | u32 count | u32 dim | count*dim f32 (record-contiguous) | ids
// all little-endian, ids newline-terminated UTF-8.
// ---------------------------------------------------------------------------

EmbeddingCache sample_cache() {
  EmbeddingCache cache;
  cache.ids = {"c1", "c2", "c3"};
  cache.embeddings.resize(2, 3);
  cache.embeddings << 0.5f, -1.25f, 3.0f,
                      2.0f,  0.75f, -0.5f;
  return cache;
}

std::uint32_t le32(const std::string& bytes, std::size_t at) {
  return std::uint32_t(std::uint8_t(bytes[at])) |
         std::uint32_t(std::uint8_t(bytes[at + 1])) << 8 |
         std::uint32_t(std::uint8_t(bytes[at + 2])) << 16 |
         std::uint32_t(std::uint8_t(bytes[at + 3])) << 24;
}

TEST_CASE("cache bytes follow the declared layout") {
  TempDir dir;
  const auto path = dir / "cache.emb";
  write_cache(sample_cache(), path);
  const std::string bytes = testing::read_file(path);

  REQUIRE(bytes.size() == 4 + 4 + 4 + 3 * 2 * 4 + 3 * 3);
  CHECK(bytes.substr(0, 4) == "EMB1");
  CHECK(le32(bytes, 4) == 3);   // count
  CHECK(le32(bytes, 8) == 2);   // dim
  float f[6];
  std::memcpy(f, bytes.data() + 12, sizeof f);
  // Record-contiguous: record 0 floats first.
  CHECK(f[0] == 0.5f);
  CHECK(f[1] == 2.0f);
  CHECK(f[2] == -1.25f);
  CHECK(f[3] == 0.75f);
  CHECK(f[4] == 3.0f);
  CHECK(f[5] == -0.5f);
  CHECK(bytes.substr(12 + 24) == "c1\nc2\nc3\n");
}

TEST_CASE("cache round-trips and rewrites byte-identically") {
  TempDir dir;
  const EmbeddingCache cache = sample_cache();
  write_cache(cache, dir / "a.emb");
  write_cache(cache, dir / "b.emb");
  CHECK(testing::read_file(dir / "a.emb") == testing::read_file(dir / "b.emb"));

  const EmbeddingCache back = read_cache(dir / "a.emb");
  CHECK(back.ids == cache.ids);
  CHECK(back.embeddings == cache.embeddings);
}

TEST_CASE("an empty cache round-trips") {
  TempDir dir;
  EmbeddingCache cache;
  cache.embeddings.resize(8, 0);
  write_cache(cache, dir / "empty.emb");
  const EmbeddingCache back = read_cache(dir / "empty.emb");
  CHECK(back.count() == 0);
  CHECK(back.dim() == 8);
}

TEST_CASE("malformed cache files are data errors") {
  TempDir dir;
  const auto path = dir / "cache.emb";
  write_cache(sample_cache(), path);
  const std::string good = testing::read_file(path);

  SUBCASE("bad magic") {
    std::string bad = good;
    bad[0] = 'X';
    testing::write_file(path, bad);
    CHECK_THROWS_AS((void)read_cache(path), Error);
  }
  SUBCASE("truncated floats") {
    testing::write_file(path, good.substr(0, 14));
    CHECK_THROWS_AS((void)read_cache(path), Error);
  }
  SUBCASE("missing ids") {
    testing::write_file(path, good.substr(0, good.size() - 3));
    CHECK_THROWS_AS((void)read_cache(path), Error);
  }
  SUBCASE("trailing garbage") {
    testing::write_file(path, good + "junk");
    CHECK_THROWS_AS((void)read_cache(path), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)read_cache(dir / "nope.emb"), Error);
  }
}

TEST_CASE("write_cache validates id/column agreement") {
  TempDir dir;
  EmbeddingCache cache = sample_cache();
  cache.ids.pop_back();
  CHECK_THROWS_AS(write_cache(cache, dir / "bad.emb"), Error);
  cache = sample_cache();
  cache.ids[1] = "has\nnewline";
  CHECK_THROWS_AS(write_cache(cache, dir / "bad.emb"), Error);
  cache = sample_cache();
  cache.ids[0] = "";
  CHECK_THROWS_AS(write_cache(cache, dir / "bad.emb"), Error);
}

}  // namespace
}  // namespace offmix
