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

#include <fstream>
#include <map>
#include <utility>

#include "offmix/bert.hpp"
#include "offmix/error.hpp"
#include "offmix/rng.hpp"

namespace offmix {

StubBackend::StubBackend(int dim, std::uint64_t seed, Vocab vocab)
    : dim_(dim), seed_(seed), vocab_(std::move(vocab)) {
  if (dim <= 0) throw_usage("stub embedding dimension must be positive");
}

Embedding StubBackend::embed(const TokenSequence& seq) const {
  // Ordered map: float addition is not associative, so accumulating in a
  // hash-iteration order would leak the original token order into the low
  // bits. Sorted accumulation keeps the embedding a pure function of the
  // token multiset, bit for bit.
  std::map<TokenId, int> freq;
  int total = 0;
  for (std::size_t i = 0; i < seq.ids.size(); ++i) {
    if (!seq.mask[i]) continue;
    ++freq[seq.ids[i]];
    ++total;
  }
  if (total == 0) throw_data("cannot embed a sequence with no real positions");

  // Projection entries are hash-addressed rather than materialized, so the
  // (vocab x dim) matrix never exists in memory; entry (t, d) is a fixed
  // pseudo-random value in [-1, 1) determined by the backend seed alone.
  Embedding out = Embedding::Zero(dim_);
  for (const auto& [token, count] : freq) {
    const float f = static_cast<float>(count) / static_cast<float>(total);
    for (int d = 0; d < dim_; ++d) {
      const std::uint64_t h =
          hash_mix(seed_, static_cast<std::uint64_t>(token),
                   static_cast<std::uint64_t>(d));
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      out[d] += f * static_cast<float>(2.0 * u - 1.0);
    }
  }
  return out;
}

namespace {

// Transformer encoder with weights loaded from disk ([CLS] pooling).
class PretrainedBackend : public EncoderBackend {
 public:
  PretrainedBackend(bert::Params<float> params, Vocab vocab)
      : params_(std::move(params)), vocab_(std::move(vocab)) {
    if (static_cast<int>(vocab_.size()) != params_.dims.vocab_size)
      throw_backend("encoder weights expect a vocabulary of " +
                    std::to_string(params_.dims.vocab_size) +
                    " tokens, but the vocabulary file has " +
                    std::to_string(vocab_.size()));
  }

  EncoderKind kind() const override {
    return EncoderKind::pretrained_multilingual;
  }
  int dim() const override { return params_.dims.hidden; }
  const Vocab& vocab() const override { return vocab_; }
  bool fine_tunable() const override { return true; }

  Embedding embed(const TokenSequence& seq) const override {
    std::vector<TokenId> prefix;
    prefix.reserve(seq.ids.size());
    for (std::size_t i = 0; i < seq.ids.size(); ++i)
      if (seq.mask[i]) prefix.push_back(seq.ids[i]);
    const bert::Cache<float> cache = bert::forward(params_, prefix);
    return cache.out_final.row(0).transpose();
  }

 private:
  bert::Params<float> params_;
  Vocab vocab_;
};

}  // namespace

std::shared_ptr<EncoderBackend> make_backend(const EncoderSettings& settings) {
  Vocab vocab = settings.vocab_path.empty() ? Vocab::basic_latin()
                                            : Vocab::load(settings.vocab_path);
  switch (settings.kind) {
    case EncoderKind::deterministic_stub:
      return std::make_shared<StubBackend>(settings.stub_dim, settings.seed,
                                           std::move(vocab));
    case EncoderKind::pretrained_multilingual: {
      if (settings.weights_path.empty())
        throw_backend("pretrained encoder '" + settings.model_id +
                      "' requires encoder.weights to point at a weights file");
      std::ifstream is(settings.weights_path, std::ios::binary);
      if (!is)
        throw_backend("cannot open encoder weights for '" + settings.model_id +
                      "': " + settings.weights_path.string());
      bert::Params<float> params;
      try {
        params = bert::load_params<float>(is);
      } catch (const Error& e) {
        throw_backend("failed to load encoder weights " +
                      settings.weights_path.string() + ": " + e.what());
      }
      return std::make_shared<PretrainedBackend>(std::move(params),
                                                 std::move(vocab));
    }
  }
  throw_usage("unknown encoder kind");
}

std::vector<Embedding> embed_corpus(const std::vector<CleanText>& texts,
                                    const EncoderBackend& backend, int max_len,
                                    int batch_size) {
  if (batch_size <= 0) throw_usage("batch size must be positive");
  std::vector<Embedding> out;
  out.reserve(texts.size());
  // Batches exist for progress granularity only; each sequence is embedded
  // independently, which is what makes the result batch-size invariant.
  for (std::size_t start = 0; start < texts.size();
       start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end =
        std::min(texts.size(), start + static_cast<std::size_t>(batch_size));
    for (std::size_t i = start; i < end; ++i) {
      try {
        out.push_back(
            backend.embed(tokenize(texts[i], backend.vocab(), max_len)));
      } catch (const Error& e) {
        throw Error(e.category(), "record " + std::to_string(i) + ": " +
                                      e.what());
      }
    }
  }
  return out;
}

}  // namespace offmix
