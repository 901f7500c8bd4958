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

#ifndef OFFMIX_HEADS_HPP
#define OFFMIX_HEADS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "offmix/bert.hpp"
#include "offmix/encoder.hpp"
#include "offmix/linear.hpp"
#include "offmix/mlp.hpp"

// The three classifier heads. The SVM and MLP consume fixed sentence
// embeddings; the fine-tuned head owns a full encoder whose weights are all
// updated jointly with its classification layer, so it consumes text.
namespace offmix {

enum class HeadKind { svm, mlp, finetune };

std::string to_string(HeadKind kind);
HeadKind head_kind_from_string(const std::string& s);

struct Prediction {
  Label label = Label::not_offensive;
  double score = 0.0;  // probability of the predicted label, in [0.5, 1]
};

struct SvmHeadModel {
  LinearModel<double> model;
  LinearObjective objective = LinearObjective::squared_hinge;
};

struct MlpHeadModel {
  MlpModel<float> model;
};

struct FinetuneHeadModel {
  bert::Params<float> encoder;
  Eigen::MatrixXf w_cls;  // hidden x kNumClasses
  Eigen::MatrixXf b_cls;  // 1 x kNumClasses
  std::vector<std::string> vocab_tokens;  // the artifact is self-contained
  int max_len = 128;
};

// A trained head plus everything needed to reuse it: resolved training
// options and a training report. Serialized as a small JSON header followed
// by a per-kind binary payload; loading an artifact reproduces its
// predictions exactly.
struct HeadArtifact {
  HeadKind kind = HeadKind::svm;
  int input_dim = 0;  // embedding dim (svm/mlp) or encoder hidden (finetune)
  nlohmann::ordered_json options;
  nlohmann::ordered_json train_report;
  std::variant<SvmHeadModel, MlpHeadModel, FinetuneHeadModel> model;
};

void save_head(const HeadArtifact& artifact,
               const std::filesystem::path& path);
HeadArtifact load_head(const std::filesystem::path& path);

// --- training --------------------------------------------------------------

struct SvmTrainOptions {
  double c = 1.0;
  LinearObjective objective = LinearObjective::squared_hinge;
  int folds = 10;
  int max_iters = 500;
  std::uint64_t seed = 0;
};

// Cross-validates (per-fold weighted F1 on the held-out fold), then fits the
// final model on all rows. X columns are records.
HeadArtifact train_svm_head(const EmbeddingMatrix& X,
                            const std::vector<Label>& y,
                            const SvmTrainOptions& opts);

struct MlpTrainOptions {
  std::vector<int> widths{128};
  double dropout = 0.2;
  double lr = 1e-3;
  int epochs = 30;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

HeadArtifact train_mlp_head(const EmbeddingMatrix& X,
                            const std::vector<Label>& y,
                            const MlpTrainOptions& opts);

struct FinetuneTrainOptions {
  std::filesystem::path weights_path;
  std::filesystem::path vocab_path;  // empty -> basic latin vocabulary
  int max_len = 128;
  double lr = 2e-5;
  int epochs = 2;
  int batch_size = 16;
  std::uint64_t seed = 0;
};

HeadArtifact train_finetune_head(const std::vector<CleanText>& texts,
                                 const std::vector<Label>& y,
                                 const FinetuneTrainOptions& opts);

// --- prediction -------------------------------------------------------------

// svm/mlp heads; X columns are records.
std::vector<Prediction> predict_embeddings(const HeadArtifact& artifact,
                                           const EmbeddingMatrix& X);

// finetune head.
std::vector<Prediction> predict_texts(const HeadArtifact& artifact,
                                      const std::vector<CleanText>& texts);

}  // namespace offmix

#endif  // OFFMIX_HEADS_HPP
