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

#include "offmix/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <unordered_map>

#include "offmix/embedding_cache.hpp"
#include "offmix/eval.hpp"
#include "offmix/textprep.hpp"

namespace offmix {

namespace {

// Appends one timestamped line to out_dir/run.log. Timestamps live only
// here, never in stage outputs, so outputs stay byte-reproducible.
void log_run(const PipelineConfig& config, const std::string& what) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  std::ofstream log(config.out_dir / "run.log", std::ios::app);
  if (!log) return;  // logging must never fail a run
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  log << stamp << " digest=" << config.digest() << ' ' << what << '\n';
}

std::vector<std::string> ids_of(const std::vector<RawRecord>& records) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.id);
  return ids;
}

// Embeddings for `records` in record order, joined from the cache by id.
EmbeddingMatrix join_embeddings(const std::vector<RawRecord>& records,
                                const EmbeddingCache& cache) {
  std::unordered_map<std::string, Eigen::Index> by_id;
  by_id.reserve(cache.ids.size());
  for (std::size_t i = 0; i < cache.ids.size(); ++i)
    by_id.emplace(cache.ids[i], static_cast<Eigen::Index>(i));

  EmbeddingMatrix X(cache.embeddings.rows(),
                    static_cast<Eigen::Index>(records.size()));
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto it = by_id.find(records[i].id);
    if (it == by_id.end()) {
      if (missing.size() < 10) missing.push_back(records[i].id);
      continue;
    }
    X.col(static_cast<Eigen::Index>(i)) = cache.embeddings.col(it->second);
  }
  if (!missing.empty()) {
    std::string msg = "embedding cache is missing ids:";
    for (const auto& id : missing) msg += " " + id;
    throw_data(msg);
  }
  return X;
}

std::vector<Label> require_labels(const std::vector<RawRecord>& records,
                                  const char* stage) {
  std::vector<Label> labels;
  labels.reserve(records.size());
  std::vector<std::string> unlabeled;
  for (const auto& r : records) {
    if (!r.label) {
      if (unlabeled.size() < 10) unlabeled.push_back(r.id);
      continue;
    }
    labels.push_back(*r.label);
  }
  if (!unlabeled.empty()) {
    std::string msg = std::string(stage) + " requires labels; unlabeled ids:";
    for (const auto& id : unlabeled) msg += " " + id;
    throw_data(msg);
  }
  return labels;
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

void write_predictions(const std::vector<RawRecord>& records,
                       const std::vector<Prediction>& preds,
                       const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw_data("cannot open predictions file for writing: " + path.string());
  os << "id\tlabel\tscore\n";
  for (std::size_t i = 0; i < records.size(); ++i)
    os << records[i].id << '\t' << to_string(preds[i].label) << '\t'
       << format_score(preds[i].score) << '\n';
  if (!os) throw_data("failed writing predictions: " + path.string());
}

struct PredRow {
  Label label;
  double score;
};

std::unordered_map<std::string, PredRow> load_predictions(
    const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw_data("cannot open predictions file: " + path.string());
  std::string line;
  if (!std::getline(is, line))
    throw_data("predictions file is empty (no header): " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id\tlabel\tscore")
    throw_data("predictions file must start with 'id<TAB>label<TAB>score': " +
               path.string());

  const LabelMap labels = LabelMap::defaults();
  std::unordered_map<std::string, PredRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw_data(path.string() + ":" + std::to_string(line_no) +
                 ": expected three tab-separated fields");
    const std::string id = line.substr(0, t1);
    const std::string label_str = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string score_str = line.substr(t2 + 1);
    const auto label = labels.lookup(label_str);
    if (!label)
      throw_data(path.string() + ":" + std::to_string(line_no) +
                 ": unknown label '" + label_str + "'");
    double score = 0.0;
    try {
      std::size_t pos = 0;
      score = std::stod(score_str, &pos);
      if (pos != score_str.size()) throw std::invalid_argument(score_str);
    } catch (const std::exception&) {
      throw_data(path.string() + ":" + std::to_string(line_no) +
                 ": bad score '" + score_str + "'");
    }
    if (!rows.emplace(id, PredRow{*label, score}).second)
      throw_data(path.string() + ":" + std::to_string(line_no) +
                 ": duplicate id '" + id + "'");
  }
  return rows;
}

}  // namespace

std::vector<RawRecord> load_clean_dataset(const std::filesystem::path& path) {
  const CorpusSchema canonical;  // id/text/label, tab
  auto records = load_dataset(path, canonical, LabelMap::defaults());
  for (const auto& r : records)
    if (!is_clean(r.text))
      throw_data("record '" + r.id + "' in " + path.string() +
                 " is not normalized text; run prep on the raw corpus first");
  return records;
}

void cmd_prep(const PipelineConfig& config, const std::filesystem::path& input,
              const std::filesystem::path& output) {
  const auto records =
      load_dataset(input, config.schema, LabelMap::defaults());
  const LemmaLexicon lexicon = config.lexicon_path.empty()
                                   ? LemmaLexicon()
                                   : LemmaLexicon::load(config.lexicon_path);
  std::vector<RawRecord> cleaned;
  cleaned.reserve(records.size());
  for (const auto& r : records) {
    RawRecord c = r;
    c.text = normalize(r.text, lexicon).value;
    cleaned.push_back(std::move(c));
  }
  save_dataset(cleaned, output, CorpusSchema{});
  log_run(config, "prep " + input.string() + " -> " + output.string());
}

void cmd_embed(const PipelineConfig& config,
               const std::filesystem::path& data,
               const std::filesystem::path& output) {
  const auto records = load_clean_dataset(data);
  EncoderSettings settings = config.encoder;
  settings.seed = stub_seed(config);
  const auto backend = make_backend(settings);

  std::vector<CleanText> texts;
  texts.reserve(records.size());
  for (const auto& r : records) texts.push_back(CleanText{r.text});

  const auto embeddings =
      embed_corpus(texts, *backend, settings.max_len, settings.batch_size);

  EmbeddingCache cache;
  cache.ids = ids_of(records);
  cache.embeddings.resize(backend->dim(),
                          static_cast<Eigen::Index>(embeddings.size()));
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    cache.embeddings.col(static_cast<Eigen::Index>(i)) = embeddings[i];
  write_cache(cache, output);
  log_run(config, "embed " + data.string() + " -> " + output.string());
}

void cmd_train(const PipelineConfig& config, HeadKind head,
               const std::filesystem::path& data,
               const std::filesystem::path& embeddings,
               const std::filesystem::path& output) {
  const auto records = load_clean_dataset(data);
  const auto labels = require_labels(records, "training");

  HeadArtifact artifact;
  if (head == HeadKind::svm || head == HeadKind::mlp) {
    if (embeddings.empty())
      throw_usage("training the " + to_string(head) +
                  " head needs --embeddings (an embedding cache)");
    const EmbeddingCache cache = read_cache(embeddings);
    const EmbeddingMatrix X = join_embeddings(records, cache);
    if (head == HeadKind::svm) {
      SvmTrainOptions opts;
      opts.c = config.svm.c;
      opts.objective = config.svm.objective;
      opts.folds = config.svm.folds;
      opts.max_iters = config.svm.max_iters;
      opts.seed = fold_seed(config);
      artifact = train_svm_head(X, labels, opts);
    } else {
      MlpTrainOptions opts;
      opts.widths = config.mlp.widths;
      opts.dropout = config.mlp.dropout;
      opts.lr = config.mlp.lr;
      opts.epochs = config.mlp.epochs;
      opts.batch_size = config.mlp.batch_size;
      opts.seed = mlp_seed(config);
      artifact = train_mlp_head(X, labels, opts);
    }
  } else {
    if (config.encoder.kind != EncoderKind::pretrained_multilingual)
      throw_backend(
          "the deterministic stub encoder is not fine-tunable; set "
          "encoder.kind = pretrained to train the finetune head");
    std::vector<CleanText> texts;
    texts.reserve(records.size());
    for (const auto& r : records) texts.push_back(CleanText{r.text});
    FinetuneTrainOptions opts;
    opts.weights_path = config.encoder.weights_path;
    opts.vocab_path = config.encoder.vocab_path;
    opts.max_len = config.encoder.max_len;
    opts.lr = config.finetune.lr;
    opts.epochs = config.finetune.epochs;
    opts.batch_size = config.finetune.batch_size;
    opts.seed = finetune_seed(config);
    artifact = train_finetune_head(texts, labels, opts);
  }
  save_head(artifact, output);
  log_run(config, "train " + to_string(head) + " " + data.string() + " -> " +
                      output.string());
}

void cmd_predict(const PipelineConfig& config,
                 const std::filesystem::path& model,
                 const std::filesystem::path& data,
                 const std::filesystem::path& embeddings,
                 const std::filesystem::path& output) {
  const HeadArtifact artifact = load_head(model);
  const auto records = load_clean_dataset(data);

  std::vector<Prediction> preds;
  if (artifact.kind == HeadKind::finetune) {
    std::vector<CleanText> texts;
    texts.reserve(records.size());
    for (const auto& r : records) texts.push_back(CleanText{r.text});
    preds = predict_texts(artifact, texts);
  } else {
    if (embeddings.empty())
      throw_usage("predicting with the " + to_string(artifact.kind) +
                  " head needs --embeddings (an embedding cache)");
    const EmbeddingCache cache = read_cache(embeddings);
    const EmbeddingMatrix X = join_embeddings(records, cache);
    preds = predict_embeddings(artifact, X);
  }
  write_predictions(records, preds, output);
  log_run(config, "predict " + model.string() + " " + data.string() + " -> " +
                      output.string());
}

void cmd_evaluate(const PipelineConfig& config,
                  const std::filesystem::path& gold,
                  const std::filesystem::path& pred,
                  const std::filesystem::path& output,
                  std::ostream& table_out, const std::string& dataset_name,
                  const std::string& head_name) {
  const auto records = load_clean_dataset(gold);
  const auto gold_labels = require_labels(records, "evaluation");
  const auto pred_rows = load_predictions(pred);

  std::vector<Label> gold_vec, pred_vec;
  gold_vec.reserve(records.size());
  pred_vec.reserve(records.size());
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto it = pred_rows.find(records[i].id);
    if (it == pred_rows.end()) {
      if (missing.size() < 10) missing.push_back(records[i].id);
      continue;
    }
    gold_vec.push_back(gold_labels[i]);
    pred_vec.push_back(it->second.label);
  }
  if (!missing.empty()) {
    std::string msg = "predictions are missing gold ids:";
    for (const auto& id : missing) msg += " " + id;
    throw_data(msg);
  }
  if (pred_rows.size() != records.size()) {
    std::unordered_map<std::string, bool> gold_ids;
    for (const auto& r : records) gold_ids.emplace(r.id, true);
    std::string msg = "predictions contain ids outside the gold set:";
    int listed = 0;
    for (const auto& [id, row] : pred_rows) {
      if (gold_ids.count(id)) continue;
      if (listed++ >= 10) break;
      msg += " " + id;
    }
    throw_data(msg);
  }

  const EvalReport report = evaluate(confusion(gold_vec, pred_vec));
  const auto j = report_json(report, dataset_name, head_name, config.seed,
                             config.digest());
  std::ofstream os(output, std::ios::binary | std::ios::trunc);
  if (!os)
    throw_data("cannot open metrics report for writing: " + output.string());
  os << j.dump(2) << '\n';
  if (!os) throw_data("failed writing metrics report: " + output.string());
  table_out << render_metrics_table(j);
  log_run(config, "evaluate " + gold.string() + " vs " + pred.string() +
                      " -> " + output.string());
}

std::string cmd_summarize(const PipelineConfig& config,
                          const std::filesystem::path& data) {
  const auto records = load_dataset(data, config.schema, LabelMap::defaults());
  return summary_json(summarize(records));
}

std::string cmd_render_metrics(const std::filesystem::path& report_path) {
  std::ifstream is(report_path, std::ios::binary);
  if (!is) throw_data("cannot open metrics report: " + report_path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw_data("metrics report is not valid JSON: " + std::string(e.what()));
  }
  return render_metrics_table(j);
}

}  // namespace offmix
