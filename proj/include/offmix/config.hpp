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

#ifndef OFFMIX_CONFIG_HPP
#define OFFMIX_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "offmix/corpus.hpp"
#include "offmix/encoder.hpp"
#include "offmix/linear.hpp"

namespace offmix {

// Resolved pipeline configuration. Loaded from a flat `key = value` file
// ('#' comments, blank lines ignored); unknown keys are usage errors so
// typos cannot silently fall back to defaults.
struct PipelineConfig {
  CorpusSchema schema;                      // corpus.* (prep input only)
  std::filesystem::path lexicon_path;       // prep.lexicon ("" -> no lexicon)
  EncoderSettings encoder;                  // encoder.*

  struct Svm {
    double c = 1.0;
    LinearObjective objective = LinearObjective::squared_hinge;
    int folds = 10;
    int max_iters = 500;
  } svm;

  struct Mlp {
    std::vector<int> widths{128};
    double dropout = 0.2;
    double lr = 1e-3;
    int epochs = 30;
    int batch_size = 32;
  } mlp;

  struct Finetune {
    double lr = 2e-5;
    int epochs = 2;
    int batch_size = 16;
  } finetune;

  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";  // not part of the digest

  static PipelineConfig load(const std::filesystem::path& path);

  // Applies one key; throws a usage error on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  // Every known key as sorted `key=value` lines, out_dir excluded. Two
  // configs behave identically iff their canonical forms match.
  std::string canonical() const;

  // FNV-1a 64-bit hash of canonical(), 16 lowercase hex digits. Stamped
  // into metrics reports so results are traceable to their configuration.
  std::string digest() const;
};

// Derived seeds, so each randomized stage draws from its own stream.
std::uint64_t fold_seed(const PipelineConfig& c);      // seed + 1
std::uint64_t mlp_seed(const PipelineConfig& c);       // seed + 2
std::uint64_t stub_seed(const PipelineConfig& c);      // seed + 3
std::uint64_t finetune_seed(const PipelineConfig& c);  // seed + 4

}  // namespace offmix

#endif  // OFFMIX_CONFIG_HPP
