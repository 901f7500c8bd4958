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

// offmix: offensive-language detection pipeline for romanized code-mixed
// comments. Stages exchange files only:
//
//   prep     raw corpus            -> cleaned corpus (normalized text)
//   embed    cleaned corpus        -> embedding cache
//   train    cleaned (+ cache)     -> model artifact
//   predict  model + cleaned (+ cache) -> predictions TSV
//   evaluate cleaned gold + predictions -> metrics report JSON
//   report   render a metrics report, or summarize a corpus
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "offmix/error.hpp"
#include "offmix/pipeline.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

offmix::PipelineConfig resolve_config(const GlobalArgs& args) {
  offmix::PipelineConfig config = args.config_path.empty()
                                      ? offmix::PipelineConfig{}
                                      : offmix::PipelineConfig::load(
                                            args.config_path);
  if (args.seed_set) config.seed = args.seed;
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offensive-language detection for code-mixed comments"};
  app.require_subcommand(1);

  GlobalArgs globals;
  app.add_option("--config", globals.config_path,
                 "pipeline configuration file (key = value lines)");
  app.add_option("--out-dir", globals.out_dir,
                 "directory for the run log (default: current directory)");
  auto* seed_opt =
      app.add_option("--seed", globals.seed, "override the configured seed");

  // prep
  std::string prep_input, prep_output;
  auto* prep = app.add_subcommand("prep", "normalize a raw corpus");
  prep->add_option("--input", prep_input, "raw corpus (TSV/CSV)")->required();
  prep->add_option("--output", prep_output, "cleaned corpus path")->required();

  // embed
  std::string embed_data, embed_output;
  auto* embed = app.add_subcommand("embed", "embed a cleaned corpus");
  embed->add_option("--data", embed_data, "cleaned corpus")->required();
  embed->add_option("--output", embed_output, "embedding cache path")
      ->required();

  // train
  std::string train_head, train_data, train_embeddings, train_output;
  auto* train = app.add_subcommand("train", "train a classifier head");
  train->add_option("--head", train_head, "svm, mlp, or finetune")
      ->required();
  train->add_option("--data", train_data, "cleaned labeled corpus")
      ->required();
  train->add_option("--embeddings", train_embeddings,
                    "embedding cache (svm/mlp heads)");
  train->add_option("--output", train_output, "model artifact path")
      ->required();

  // predict
  std::string predict_model, predict_data, predict_embeddings, predict_output;
  auto* predict = app.add_subcommand("predict", "label a cleaned corpus");
  predict->add_option("--model", predict_model, "model artifact")->required();
  predict->add_option("--data", predict_data, "cleaned corpus")->required();
  predict->add_option("--embeddings", predict_embeddings,
                      "embedding cache (svm/mlp heads)");
  predict->add_option("--output", predict_output, "predictions TSV path")
      ->required();

  // evaluate
  std::string eval_gold, eval_pred, eval_output, eval_dataset, eval_head;
  auto* evaluate =
      app.add_subcommand("evaluate", "score predictions against gold labels");
  evaluate->add_option("--gold", eval_gold, "cleaned labeled corpus")
      ->required();
  evaluate->add_option("--pred", eval_pred, "predictions TSV")->required();
  evaluate->add_option("--out", eval_output, "metrics report JSON path")
      ->required();
  evaluate->add_option("--dataset", eval_dataset,
                       "dataset name stamped into the report "
                       "(default: gold file stem)");
  evaluate->add_option("--head", eval_head,
                       "head name stamped into the report");

  // report
  std::string report_metrics, report_summarize;
  auto* report =
      app.add_subcommand("report", "render a metrics report or summarize a "
                                   "corpus");
  auto* metrics_opt = report->add_option("--metrics", report_metrics,
                                         "metrics report JSON to render");
  auto* summarize_opt = report->add_option(
      "--summarize", report_summarize, "corpus to summarize (one-line JSON)");
  metrics_opt->excludes(summarize_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit 0; any parse error is 1
  }

  try {
    globals.seed_set = seed_opt->count() > 0;
    const offmix::PipelineConfig config = resolve_config(globals);

    if (prep->parsed()) {
      offmix::cmd_prep(config, prep_input, prep_output);
    } else if (embed->parsed()) {
      offmix::cmd_embed(config, embed_data, embed_output);
    } else if (train->parsed()) {
      offmix::cmd_train(config, offmix::head_kind_from_string(train_head),
                        train_data, train_embeddings, train_output);
    } else if (predict->parsed()) {
      offmix::cmd_predict(config, predict_model, predict_data,
                          predict_embeddings, predict_output);
    } else if (evaluate->parsed()) {
      const std::string dataset =
          eval_dataset.empty()
              ? std::filesystem::path(eval_gold).stem().string()
              : eval_dataset;
      const std::string head = eval_head.empty() ? "unspecified" : eval_head;
      offmix::cmd_evaluate(config, eval_gold, eval_pred, eval_output,
                           std::cout, dataset, head);
    } else if (report->parsed()) {
      if (!report_metrics.empty())
        std::cout << offmix::cmd_render_metrics(report_metrics);
      else if (!report_summarize.empty())
        std::cout << offmix::cmd_summarize(config, report_summarize) << '\n';
      else
        offmix::throw_usage("report needs --metrics or --summarize");
    }
  } catch (const offmix::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
