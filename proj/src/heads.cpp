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

#include "offmix/heads.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "offmix/binio.hpp"
#include "offmix/error.hpp"
#include "offmix/eval.hpp"
#include "offmix/folds.hpp"
#include "offmix/rng.hpp"
#include "offmix/token_sequence.hpp"

namespace offmix {

std::string to_string(HeadKind kind) {
  switch (kind) {
    case HeadKind::svm: return "svm";
    case HeadKind::mlp: return "mlp";
    case HeadKind::finetune: return "finetune";
  }
  throw_usage("unknown head kind");
}

HeadKind head_kind_from_string(const std::string& s) {
  if (s == "svm") return HeadKind::svm;
  if (s == "mlp") return HeadKind::mlp;
  if (s == "finetune") return HeadKind::finetune;
  throw_usage("unknown head '" + s + "'; expected svm, mlp, or finetune");
}

namespace {

constexpr char kArtifactMagic[4] = {'O', 'M', 'H', '1'};
constexpr int kArtifactVersion = 1;

double sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

// Collapses a probability of the OFFENSIVE class into a prediction whose
// score is the probability of the label actually predicted.
Prediction from_prob_offensive(double p_off) {
  if (p_off >= 0.5) return {Label::offensive, p_off};
  return {Label::not_offensive, 1.0 - p_off};
}

double label_sign(Label l) { return l == Label::offensive ? 1.0 : -1.0; }

std::vector<TokenId> masked_prefix(const TokenSequence& seq) {
  std::vector<TokenId> prefix;
  prefix.reserve(seq.ids.size());
  for (std::size_t i = 0; i < seq.ids.size(); ++i)
    if (seq.mask[i]) prefix.push_back(seq.ids[i]);
  return prefix;
}

void check_training_inputs(Eigen::Index n, std::size_t labels) {
  if (n == 0) throw_data("cannot train a head on an empty dataset");
  if (static_cast<std::size_t>(n) != labels)
    throw_data("embedding count and label count disagree (" +
               std::to_string(n) + " vs " + std::to_string(labels) + ")");
}

// --- tensor serialization helpers ---

template <typename Mat>
void write_tensor_f32(std::ostream& os, const Mat& t) {
  binio::put_u32(os, static_cast<std::uint32_t>(t.rows()));
  binio::put_u32(os, static_cast<std::uint32_t>(t.cols()));
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c)
      binio::put_f32(os, static_cast<float>(t(r, c)));
}

Eigen::MatrixXf read_tensor_f32(std::istream& is, const char* what) {
  const auto rows = binio::get_u32(is, what);
  const auto cols = binio::get_u32(is, what);
  Eigen::MatrixXf t(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c)
      t(r, c) = binio::get_f32(is, what);
  return t;
}

}  // namespace

// --- SVM ---------------------------------------------------------------

HeadArtifact train_svm_head(const EmbeddingMatrix& X,
                            const std::vector<Label>& y,
                            const SvmTrainOptions& opts) {
  const Eigen::Index n = X.cols();
  const Eigen::Index d = X.rows();
  check_training_inputs(n, y.size());

  const Eigen::MatrixXd rows = X.transpose().cast<double>();
  Eigen::VectorXd signs(n);
  for (Eigen::Index i = 0; i < n; ++i)
    signs[i] = label_sign(y[static_cast<std::size_t>(i)]);

  LinearFitOptions<double> fit_opts;
  fit_opts.c = opts.c;
  fit_opts.objective = opts.objective;
  fit_opts.max_iters = opts.max_iters;

  // Cross-validation: train on k-1 folds, score weighted F1 on the held-out
  // fold.
  const FoldPlan plan = make_folds(static_cast<std::size_t>(n), opts.folds,
                                   opts.seed);
  std::vector<double> fold_f1;
  fold_f1.reserve(static_cast<std::size_t>(opts.folds));
  for (int fold = 0; fold < opts.folds; ++fold) {
    const auto train_idx = plan.train_indices(fold);
    const auto test_idx = plan.test_indices(fold);
    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train_idx.size()), d);
    Eigen::VectorXd ytr(static_cast<Eigen::Index>(train_idx.size()));
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      Xtr.row(static_cast<Eigen::Index>(i)) =
          rows.row(static_cast<Eigen::Index>(train_idx[i]));
      ytr[static_cast<Eigen::Index>(i)] =
          signs[static_cast<Eigen::Index>(train_idx[i])];
    }
    const auto fit = fit_linear(Xtr, ytr, fit_opts);
    std::vector<Label> gold, pred;
    gold.reserve(test_idx.size());
    pred.reserve(test_idx.size());
    for (std::size_t idx : test_idx) {
      gold.push_back(y[idx]);
      const double margin =
          fit.model.margin(rows.row(static_cast<Eigen::Index>(idx)).transpose());
      pred.push_back(margin >= 0.0 ? Label::offensive : Label::not_offensive);
    }
    fold_f1.push_back(evaluate(confusion(gold, pred)).weighted_f1);
  }
  const double cv_mean =
      std::accumulate(fold_f1.begin(), fold_f1.end(), 0.0) /
      static_cast<double>(fold_f1.size());

  const auto fit = fit_linear(rows, signs, fit_opts);

  HeadArtifact artifact;
  artifact.kind = HeadKind::svm;
  artifact.input_dim = static_cast<int>(d);
  artifact.options = {
      {"c", opts.c},
      {"mode",
       opts.objective == LinearObjective::squared_hinge ? "svm" : "logreg"},
      {"folds", opts.folds},
      {"max_iters", opts.max_iters},
      {"seed", opts.seed},
  };
  artifact.train_report = {
      {"fold_weighted_f1", fold_f1},
      {"cv_mean_weighted_f1", cv_mean},
      {"final_objective_value", fit.objective_value},
      {"iterations", fit.iterations},
      {"converged", fit.converged},
  };
  artifact.model = SvmHeadModel{fit.model, opts.objective};
  return artifact;
}

// --- MLP ---------------------------------------------------------------

HeadArtifact train_mlp_head(const EmbeddingMatrix& X,
                            const std::vector<Label>& y,
                            const MlpTrainOptions& opts) {
  const Eigen::Index n = X.cols();
  const Eigen::Index d = X.rows();
  check_training_inputs(n, y.size());
  if (n < 2) throw_data("mlp training needs at least 2 examples");
  if (opts.batch_size < 2)
    throw_usage("mlp batch size must be at least 2 (batch norm)");
  if (opts.epochs <= 0) throw_usage("mlp training needs at least one epoch");

  const MlpMat<float> rows = X.transpose();
  MlpModel<float> model = mlp_init<float>(static_cast<int>(d), opts.widths,
                                          opts.seed);
  MlpAdamState<float> adam = mlp_adam_init(model);
  Rng train_rng(hash_mix(opts.seed, 0x6d6c70, 1));  // shuffle + dropout stream

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> epoch_loss;
  epoch_loss.reserve(static_cast<std::size_t>(opts.epochs));
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    train_rng.shuffle(order);
    double loss_sum = 0.0;
    Eigen::Index seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(opts.batch_size));
      const auto bsize = static_cast<Eigen::Index>(end - start);
      if (bsize < 2) continue;  // batch norm is undefined on one example
      MlpMat<float> Xb(bsize, d);
      std::vector<Label> yb(static_cast<std::size_t>(bsize));
      for (std::size_t i = start; i < end; ++i) {
        Xb.row(static_cast<Eigen::Index>(i - start)) =
            rows.row(static_cast<Eigen::Index>(order[i]));
        yb[i - start] = y[order[i]];
      }
      MlpParams<float> grads = mlp_zero_grads(model);
      MlpBatchStats<float> stats;
      const float loss = mlp_loss_and_grads(
          model, Xb, yb, static_cast<float>(opts.dropout), &train_rng, grads,
          &stats);
      mlp_adam_step(model.params, grads, adam, static_cast<float>(opts.lr));
      mlp_update_running(model, stats);
      loss_sum += static_cast<double>(loss) * static_cast<double>(bsize);
      seen += bsize;
    }
    epoch_loss.push_back(loss_sum / static_cast<double>(seen));
  }

  HeadArtifact artifact;
  artifact.kind = HeadKind::mlp;
  artifact.input_dim = static_cast<int>(d);
  artifact.options = {
      {"widths", opts.widths},   {"dropout", opts.dropout},
      {"lr", opts.lr},           {"epochs", opts.epochs},
      {"batch_size", opts.batch_size},
      {"seed", opts.seed},
  };
  artifact.train_report = {
      {"epoch_mean_loss", epoch_loss},
      {"final_loss", epoch_loss.back()},
  };
  artifact.model = MlpHeadModel{std::move(model)};
  return artifact;
}

// --- fine-tuned encoder ---------------------------------------------------

HeadArtifact train_finetune_head(const std::vector<CleanText>& texts,
                                 const std::vector<Label>& y,
                                 const FinetuneTrainOptions& opts) {
  check_training_inputs(static_cast<Eigen::Index>(texts.size()), y.size());
  if (opts.epochs <= 0)
    throw_usage("fine-tuning needs at least one epoch");
  if (opts.batch_size <= 0) throw_usage("batch size must be positive");

  std::ifstream is(opts.weights_path, std::ios::binary);
  if (!is)
    throw_backend("cannot open encoder weights: " +
                  opts.weights_path.string());
  bert::Params<float> params;
  try {
    params = bert::load_params<float>(is);
  } catch (const Error& e) {
    throw_backend("failed to load encoder weights " +
                  opts.weights_path.string() + ": " + e.what());
  }
  Vocab vocab = opts.vocab_path.empty() ? Vocab::basic_latin()
                                        : Vocab::load(opts.vocab_path);
  if (static_cast<int>(vocab.size()) != params.dims.vocab_size)
    throw_backend("encoder weights expect a vocabulary of " +
                  std::to_string(params.dims.vocab_size) +
                  " tokens, but the vocabulary has " +
                  std::to_string(vocab.size()));

  const int H = params.dims.hidden;
  const int max_len = std::min(opts.max_len, params.dims.max_position);

  std::vector<std::vector<TokenId>> prefixes;
  prefixes.reserve(texts.size());
  for (const CleanText& t : texts)
    prefixes.push_back(masked_prefix(tokenize(t, vocab, max_len)));

  // Classification layer on the position-0 hidden state.
  Rng init_rng(opts.seed);
  Eigen::MatrixXf w_cls(H, kNumClasses);
  for (Eigen::Index r = 0; r < w_cls.rows(); ++r)
    for (Eigen::Index c = 0; c < w_cls.cols(); ++c)
      w_cls(r, c) = 0.02f * static_cast<float>(init_rng.next_normal());
  Eigen::MatrixXf b_cls = Eigen::MatrixXf::Zero(1, kNumClasses);

  bert::AdamState<float> enc_adam(params);
  Eigen::MatrixXf m_w = Eigen::MatrixXf::Zero(H, kNumClasses);
  Eigen::MatrixXf v_w = Eigen::MatrixXf::Zero(H, kNumClasses);
  Eigen::MatrixXf m_b = Eigen::MatrixXf::Zero(1, kNumClasses);
  Eigen::MatrixXf v_b = Eigen::MatrixXf::Zero(1, kNumClasses);
  const float lr = static_cast<float>(opts.lr);
  auto adam_mat = [lr](Eigen::MatrixXf& p, const Eigen::MatrixXf& g,
                       Eigen::MatrixXf& m, Eigen::MatrixXf& v, long step) {
    const float bc1 = 1.0f - std::pow(0.9f, static_cast<float>(step));
    const float bc2 = 1.0f - std::pow(0.999f, static_cast<float>(step));
    m = 0.9f * m + 0.1f * g;
    v = (0.999f * v.array() + 0.001f * g.array().square()).matrix();
    p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + 1e-8f);
  };

  Rng order_rng(hash_mix(opts.seed, 0x6674, 1));
  std::vector<std::size_t> order(texts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> epoch_loss;
  epoch_loss.reserve(static_cast<std::size_t>(opts.epochs));
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    order_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(opts.batch_size));
      const float inv_b = 1.0f / static_cast<float>(end - start);

      bert::Params<float> grads = bert::zeros_like(params);
      Eigen::MatrixXf g_w = Eigen::MatrixXf::Zero(H, kNumClasses);
      Eigen::MatrixXf g_b = Eigen::MatrixXf::Zero(1, kNumClasses);
      for (std::size_t i = start; i < end; ++i) {
        const auto& prefix = prefixes[order[i]];
        const bert::Cache<float> cache = bert::forward(params, prefix);
        const Eigen::MatrixXf cls = cache.out_final.row(0);  // 1 x H
        Eigen::MatrixXf logits = cls * w_cls + b_cls;        // 1 x 2
        const float mx = logits.maxCoeff();
        Eigen::MatrixXf probs =
            (logits.array() - mx).exp().matrix();
        probs /= probs.sum();

        const int cls_idx = class_index(y[order[i]]);
        loss_sum -= std::log(
            std::max(probs(0, cls_idx), 1e-30f));
        Eigen::MatrixXf dlogits = probs * inv_b;
        dlogits(0, cls_idx) -= inv_b;

        g_w += cls.transpose() * dlogits;
        g_b += dlogits;
        bert::Mat<float> d_out = bert::Mat<float>::Zero(
            static_cast<Eigen::Index>(prefix.size()), H);
        d_out.row(0) = dlogits * w_cls.transpose();
        bert::backward(params, cache, d_out, grads);
      }
      bert::adam_step(params, grads, enc_adam, lr);
      adam_mat(w_cls, g_w, m_w, v_w, enc_adam.step);
      adam_mat(b_cls, g_b, m_b, v_b, enc_adam.step);
    }
    epoch_loss.push_back(loss_sum / static_cast<double>(texts.size()));
  }

  HeadArtifact artifact;
  artifact.kind = HeadKind::finetune;
  artifact.input_dim = H;
  artifact.options = {
      {"lr", opts.lr},
      {"epochs", opts.epochs},
      {"batch_size", opts.batch_size},
      {"max_len", max_len},
      {"seed", opts.seed},
  };
  artifact.train_report = {
      {"epoch_mean_loss", epoch_loss},
      {"final_loss", epoch_loss.back()},
      {"examples", texts.size()},
      {"encoder",
       {{"vocab_size", params.dims.vocab_size},
        {"hidden", params.dims.hidden},
        {"layers", params.dims.layers},
        {"heads", params.dims.heads},
        {"intermediate", params.dims.intermediate},
        {"max_position", params.dims.max_position}}},
  };
  FinetuneHeadModel model;
  model.encoder = std::move(params);
  model.w_cls = std::move(w_cls);
  model.b_cls = std::move(b_cls);
  model.vocab_tokens = vocab.tokens();
  model.max_len = max_len;
  artifact.model = std::move(model);
  return artifact;
}

// --- prediction -------------------------------------------------------------

std::vector<Prediction> predict_embeddings(const HeadArtifact& artifact,
                                           const EmbeddingMatrix& X) {
  if (artifact.kind == HeadKind::finetune)
    throw_usage("the finetune head predicts from text, not embeddings");
  if (static_cast<int>(X.rows()) != artifact.input_dim && X.cols() > 0)
    throw_data("embedding dimension " + std::to_string(X.rows()) +
               " does not match the model's input dimension " +
               std::to_string(artifact.input_dim));

  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(X.cols()));
  if (artifact.kind == HeadKind::svm) {
    const auto& head = std::get<SvmHeadModel>(artifact.model);
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
      const double margin =
          head.model.margin(X.col(i).cast<double>().eval());
      out.push_back(from_prob_offensive(sigmoid(margin)));
    }
  } else {
    const auto& head = std::get<MlpHeadModel>(artifact.model);
    if (X.cols() > 0) {
      const MlpMat<float> rows = X.transpose();
      const MlpMat<float> probs = mlp_infer(head.model, rows);
      for (Eigen::Index i = 0; i < probs.rows(); ++i)
        out.push_back(from_prob_offensive(
            static_cast<double>(probs(i, class_index(Label::offensive)))));
    }
  }
  return out;
}

std::vector<Prediction> predict_texts(const HeadArtifact& artifact,
                                      const std::vector<CleanText>& texts) {
  if (artifact.kind != HeadKind::finetune)
    throw_usage("the " + to_string(artifact.kind) +
                " head predicts from embeddings, not text");
  const auto& head = std::get<FinetuneHeadModel>(artifact.model);
  const Vocab vocab = Vocab::from_tokens(head.vocab_tokens);

  std::vector<Prediction> out;
  out.reserve(texts.size());
  for (const CleanText& text : texts) {
    const auto prefix = masked_prefix(tokenize(text, vocab, head.max_len));
    const bert::Cache<float> cache = bert::forward(head.encoder, prefix);
    Eigen::MatrixXf logits = cache.out_final.row(0) * head.w_cls + head.b_cls;
    const float mx = logits.maxCoeff();
    Eigen::MatrixXf probs = (logits.array() - mx).exp().matrix();
    probs /= probs.sum();
    out.push_back(from_prob_offensive(
        static_cast<double>(probs(0, class_index(Label::offensive)))));
  }
  return out;
}

// --- serialization -----------------------------------------------------------

void save_head(const HeadArtifact& artifact,
               const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw_data("cannot open model artifact for writing: " + path.string());

  nlohmann::ordered_json header;
  header["format_version"] = kArtifactVersion;
  header["kind"] = to_string(artifact.kind);
  header["input_dim"] = artifact.input_dim;
  header["options"] = artifact.options;
  header["train_report"] = artifact.train_report;
  const std::string header_bytes = header.dump();

  binio::put_magic(os, kArtifactMagic);
  binio::put_u32(os, static_cast<std::uint32_t>(header_bytes.size()));
  os.write(header_bytes.data(),
           static_cast<std::streamsize>(header_bytes.size()));

  switch (artifact.kind) {
    case HeadKind::svm: {
      const auto& head = std::get<SvmHeadModel>(artifact.model);
      binio::put_u32(os,
                     head.objective == LinearObjective::squared_hinge ? 0 : 1);
      binio::put_u32(os, static_cast<std::uint32_t>(head.model.w.size()));
      for (Eigen::Index i = 0; i < head.model.w.size(); ++i)
        binio::put_f64(os, head.model.w[i]);
      binio::put_f64(os, head.model.b);
      break;
    }
    case HeadKind::mlp: {
      const auto& head = std::get<MlpHeadModel>(artifact.model);
      binio::put_u32(os, static_cast<std::uint32_t>(head.model.input_dim));
      binio::put_u32(os,
                     static_cast<std::uint32_t>(head.model.widths.size()));
      for (int w : head.model.widths)
        binio::put_u32(os, static_cast<std::uint32_t>(w));
      head.model.params.for_each(
          [&](const MlpMat<float>& t) { write_tensor_f32(os, t); });
      for (const auto& run : head.model.running) {
        write_tensor_f32(os, run.mean);
        write_tensor_f32(os, run.var);
      }
      break;
    }
    case HeadKind::finetune: {
      const auto& head = std::get<FinetuneHeadModel>(artifact.model);
      bert::save_params(head.encoder, os);
      write_tensor_f32(os, head.w_cls);
      write_tensor_f32(os, head.b_cls);
      binio::put_u32(os, static_cast<std::uint32_t>(head.max_len));
      binio::put_u32(os,
                     static_cast<std::uint32_t>(head.vocab_tokens.size()));
      for (const std::string& token : head.vocab_tokens) {
        binio::put_u32(os, static_cast<std::uint32_t>(token.size()));
        os.write(token.data(), static_cast<std::streamsize>(token.size()));
      }
      break;
    }
  }
  if (!os) throw_data("failed writing model artifact: " + path.string());
}

HeadArtifact load_head(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw_data("cannot open model artifact: " + path.string());

  binio::expect_magic(is, kArtifactMagic, "model artifact");
  const std::uint32_t header_len = binio::get_u32(is, "artifact header length");
  std::string header_bytes(header_len, '\0');
  if (!is.read(header_bytes.data(), header_len))
    throw_data("model artifact truncated in the header");

  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(header_bytes);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("model artifact header is not valid JSON: ") +
               e.what());
  }

  HeadArtifact artifact;
  try {
    if (header.at("format_version").get<int>() != kArtifactVersion)
      throw_data("unsupported model artifact version");
    artifact.kind = head_kind_from_string(header.at("kind").get<std::string>());
    artifact.input_dim = header.at("input_dim").get<int>();
    artifact.options = header.at("options");
    artifact.train_report = header.at("train_report");
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("model artifact header is missing fields: ") +
               e.what());
  }

  switch (artifact.kind) {
    case HeadKind::svm: {
      SvmHeadModel head;
      head.objective = binio::get_u32(is, "svm objective") == 0
                           ? LinearObjective::squared_hinge
                           : LinearObjective::logistic;
      const std::uint32_t dim = binio::get_u32(is, "svm weight count");
      head.model.w.resize(static_cast<Eigen::Index>(dim));
      for (std::uint32_t i = 0; i < dim; ++i)
        head.model.w[static_cast<Eigen::Index>(i)] =
            binio::get_f64(is, "svm weights");
      head.model.b = binio::get_f64(is, "svm bias");
      if (static_cast<int>(dim) != artifact.input_dim)
        throw_data("svm weight count disagrees with the artifact header");
      artifact.model = std::move(head);
      break;
    }
    case HeadKind::mlp: {
      MlpHeadModel head;
      head.model.input_dim =
          static_cast<int>(binio::get_u32(is, "mlp input dim"));
      const std::uint32_t nl = binio::get_u32(is, "mlp layer count");
      for (std::uint32_t i = 0; i < nl; ++i)
        head.model.widths.push_back(
            static_cast<int>(binio::get_u32(is, "mlp widths")));
      int fan_in = head.model.input_dim;
      for (int width : head.model.widths) {
        typename MlpParams<float>::Layer layer;
        layer.w = read_tensor_f32(is, "mlp dense weights");
        layer.b = read_tensor_f32(is, "mlp dense bias");
        layer.gamma = read_tensor_f32(is, "mlp batchnorm gamma");
        layer.beta = read_tensor_f32(is, "mlp batchnorm beta");
        if (layer.w.rows() != fan_in || layer.w.cols() != width ||
            layer.b.cols() != width || layer.gamma.cols() != width ||
            layer.beta.cols() != width)
          throw_data("mlp tensor shapes disagree with the declared widths");
        head.model.params.layers.push_back(std::move(layer));
        fan_in = width;
      }
      head.model.params.w_out = read_tensor_f32(is, "mlp output weights");
      head.model.params.b_out = read_tensor_f32(is, "mlp output bias");
      if (head.model.params.w_out.rows() != fan_in ||
          head.model.params.w_out.cols() != kNumClasses)
        throw_data("mlp output layer shape disagrees with the widths");
      for (std::size_t i = 0; i < head.model.widths.size(); ++i) {
        typename MlpModel<float>::RunningStats run;
        run.mean = read_tensor_f32(is, "mlp running mean");
        run.var = read_tensor_f32(is, "mlp running variance");
        head.model.running.push_back(std::move(run));
      }
      if (head.model.input_dim != artifact.input_dim)
        throw_data("mlp input dim disagrees with the artifact header");
      artifact.model = std::move(head);
      break;
    }
    case HeadKind::finetune: {
      FinetuneHeadModel head;
      head.encoder = bert::load_params<float>(is);
      head.w_cls = read_tensor_f32(is, "classifier weights");
      head.b_cls = read_tensor_f32(is, "classifier bias");
      head.max_len = static_cast<int>(binio::get_u32(is, "max_len"));
      const std::uint32_t vocab_size = binio::get_u32(is, "vocab size");
      head.vocab_tokens.reserve(vocab_size);
      for (std::uint32_t i = 0; i < vocab_size; ++i) {
        const std::uint32_t len = binio::get_u32(is, "vocab token length");
        std::string token(len, '\0');
        if (!is.read(token.data(), len))
          throw_data("model artifact truncated in the vocabulary");
        head.vocab_tokens.push_back(std::move(token));
      }
      if (static_cast<int>(head.vocab_tokens.size()) !=
          head.encoder.dims.vocab_size)
        throw_data("embedded vocabulary size disagrees with encoder weights");
      if (head.w_cls.rows() != head.encoder.dims.hidden ||
          head.w_cls.cols() != kNumClasses)
        throw_data("classifier weight shape disagrees with the encoder");
      artifact.model = std::move(head);
      break;
    }
  }
  return artifact;
}

}  // namespace offmix
