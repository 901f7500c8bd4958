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

#ifndef OFFMIX_ENCODER_HPP
#define OFFMIX_ENCODER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "offmix/token_sequence.hpp"
#include "offmix/vocab.hpp"

namespace offmix {

// One sentence embedding; all entries finite, dimension fixed per backend.
using Embedding = Eigen::VectorXf;

// Column i is the embedding of record i. Matches the cache file layout,
// where each record's floats are contiguous.
using EmbeddingMatrix = Eigen::MatrixXf;

enum class EncoderKind { pretrained_multilingual, deterministic_stub };

// Sentence-embedding backend. Same (instance, sequence) always yields the
// identical embedding; all backends here are reentrant for embed calls.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  virtual EncoderKind kind() const = 0;
  virtual int dim() const = 0;
  virtual const Vocab& vocab() const = 0;

  // Hidden state at position 0 ([CLS] pooling).
  virtual Embedding embed(const TokenSequence& seq) const = 0;

  virtual bool fine_tunable() const { return false; }
};

// Seeded pseudo-random projection of the token-id frequency histogram over
// the masked positions. Hermetic stand-in for the pretrained encoder: no
// weights on disk, deterministic across runs and platforms.
class StubBackend : public EncoderBackend {
 public:
  StubBackend(int dim, std::uint64_t seed, Vocab vocab = Vocab::basic_latin());

  EncoderKind kind() const override { return EncoderKind::deterministic_stub; }
  int dim() const override { return dim_; }
  const Vocab& vocab() const override { return vocab_; }
  Embedding embed(const TokenSequence& seq) const override;

 private:
  int dim_;
  std::uint64_t seed_;
  Vocab vocab_;
};

struct EncoderSettings {
  EncoderKind kind = EncoderKind::deterministic_stub;
  std::string model_id = "bert-base-multilingual-cased";
  std::filesystem::path weights_path;  // pretrained kind only
  std::filesystem::path vocab_path;    // empty -> Vocab::basic_latin()
  int max_len = 128;
  int batch_size = 32;
  int stub_dim = 64;
  std::uint64_t seed = 0;
};

// Instantiates the configured backend. For the pretrained kind a readable
// weights file is required; a missing or unreadable one is a backend error,
// never a silent fallback to the stub.
std::shared_ptr<EncoderBackend> make_backend(const EncoderSettings& settings);

// Order-preserving corpus embedding; the result is independent of
// batch_size. Embed failures are rethrown with the index of the failing
// text attached.
std::vector<Embedding> embed_corpus(const std::vector<CleanText>& texts,
                                    const EncoderBackend& backend, int max_len,
                                    int batch_size);

}  // namespace offmix

#endif  // OFFMIX_ENCODER_HPP
