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

#ifndef OFFMIX_PIPELINE_HPP
#define OFFMIX_PIPELINE_HPP

#include <filesystem>
#include <ostream>
#include <string>

#include "offmix/config.hpp"
#include "offmix/heads.hpp"

// File-mediated pipeline stages, shared by the command-line tool and the
// tests. Raw corpora are read with the configured schema; every other stage
// exchanges the canonical cleaned format (tab-separated id/text/label).
namespace offmix {

// Raw corpus -> cleaned corpus (normalized text, canonical columns).
void cmd_prep(const PipelineConfig& config,
              const std::filesystem::path& input,
              const std::filesystem::path& output);

// Cleaned corpus -> embedding cache, in record order.
void cmd_embed(const PipelineConfig& config,
               const std::filesystem::path& data,
               const std::filesystem::path& output);

// Cleaned corpus (+ embedding cache for svm/mlp) -> model artifact.
void cmd_train(const PipelineConfig& config, HeadKind head,
               const std::filesystem::path& data,
               const std::filesystem::path& embeddings,
               const std::filesystem::path& output);

// Model artifact + cleaned corpus (+ cache for svm/mlp) -> predictions TSV
// (id, label, score) in the data file's record order.
void cmd_predict(const PipelineConfig& config,
                 const std::filesystem::path& model,
                 const std::filesystem::path& data,
                 const std::filesystem::path& embeddings,
                 const std::filesystem::path& output);

// Labeled cleaned corpus + predictions TSV -> metrics report JSON; also
// renders the metrics table to `table_out`.
void cmd_evaluate(const PipelineConfig& config,
                  const std::filesystem::path& gold,
                  const std::filesystem::path& pred,
                  const std::filesystem::path& output,
                  std::ostream& table_out, const std::string& dataset_name,
                  const std::string& head_name);

// One-line JSON label/record counts for a corpus (configured schema).
std::string cmd_summarize(const PipelineConfig& config,
                          const std::filesystem::path& data);

// Renders the metrics table from a report JSON written by cmd_evaluate.
std::string cmd_render_metrics(const std::filesystem::path& report_path);

// Loads a cleaned corpus (canonical columns) and verifies every text is
// normalized, pointing at `prep` otherwise.
std::vector<RawRecord> load_clean_dataset(const std::filesystem::path& path);

}  // namespace offmix

#endif  // OFFMIX_PIPELINE_HPP
