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

#include "offmix/mlp.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "offmix/heads.hpp"
#include "offmix/rng.hpp"

namespace offmix {
namespace {

// Every parameter of a small two-hidden-layer network is checked against a
// central finite difference of the batch loss in double precision. Dropout
// is off so the loss is a deterministic function of the parameters; batch
// normalization uses batch statistics on both sides of the comparison.
TEST_CASE("analytic gradients match finite differences through batchnorm") {
  Rng rng(515);
  const int d = 6, B = 5;
  MlpModel<double> model = mlp_init<double>(d, {4, 3}, 515);
  // Nudge the running stats away from init so nothing accidentally depends
  // on them in training mode.
  model.running[0].mean.setConstant(0.3);

  MlpMat<double> X(B, d);
  for (int i = 0; i < B; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.next_normal();
  const std::vector<Label> labels{Label::offensive, Label::not_offensive,
                                  Label::offensive, Label::offensive,
                                  Label::not_offensive};

  MlpParams<double> grads = mlp_zero_grads(model);
  (void)mlp_loss_and_grads<double>(model, X, labels, 0.0, nullptr, grads,
                                   nullptr);

  std::vector<MlpMat<double>*> tensors;
  model.params.for_each([&](MlpMat<double>& t) { tensors.push_back(&t); });
  std::vector<const MlpMat<double>*> grad_tensors;
  grads.for_each(
      [&](const MlpMat<double>& t) { grad_tensors.push_back(&t); });
  REQUIRE(tensors.size() == grad_tensors.size());

  const double h = 1e-5;
  int checked = 0;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    MlpMat<double>& tensor = *tensors[t];
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
        const double saved = tensor(r, c);
        MlpParams<double> dummy = mlp_zero_grads(model);
        tensor(r, c) = saved + h;
        const double fp = mlp_loss_and_grads<double>(model, X, labels, 0.0,
                                                     nullptr, dummy, nullptr);
        tensor(r, c) = saved - h;
        const double fm = mlp_loss_and_grads<double>(model, X, labels, 0.0,
                                                     nullptr, dummy, nullptr);
        tensor(r, c) = saved;

        const double numeric = (fp - fm) / (2 * h);
        const double analytic = (*grad_tensors[t])(r, c);
        const double denom =
            std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        CAPTURE(t);
        CAPTURE(r);
        CAPTURE(c);
        REQUIRE(std::abs(analytic - numeric) / denom < 1e-4);
        ++checked;
      }
    }
  }
  CHECK(checked > 50);  // the whole network was covered
}

TEST_CASE("loss decreases under adam on a separable batch") {
  Rng rng(99);
  const int d = 4, B = 16;
  MlpModel<double> model = mlp_init<double>(d, {8}, 99);
  MlpMat<double> X(B, d);
  std::vector<Label> labels;
  for (int i = 0; i < B; ++i) {
    const bool off = i % 2 == 0;
    for (int j = 0; j < d; ++j)
      X(i, j) = (off ? 1.0 : -1.0) + 0.1 * rng.next_normal();
    labels.push_back(off ? Label::offensive : Label::not_offensive);
  }

  MlpAdamState<double> adam = mlp_adam_init(model);
  MlpParams<double> grads = mlp_zero_grads(model);
  const double first =
      mlp_loss_and_grads<double>(model, X, labels, 0.0, nullptr, grads, nullptr);
  double last = first;
  for (int step = 0; step < 60; ++step) {
    grads = mlp_zero_grads(model);
    MlpBatchStats<double> stats;
    last = mlp_loss_and_grads<double>(model, X, labels, 0.0, nullptr, grads,
                                      &stats);
    mlp_adam_step(model.params, grads, adam, 0.01);
    mlp_update_running(model, stats);
  }
  CHECK(last < 0.2 * first);
}

TEST_CASE("inference uses running statistics and is deterministic") {
  MlpModel<float> model = mlp_init<float>(3, {5}, 7);
  MlpMat<float> X(2, 3);
  X << 0.5f, -1.0f, 2.0f, 1.5f, 0.0f, -0.5f;
  const MlpMat<float> a = mlp_infer(model, X);
  const MlpMat<float> b = mlp_infer(model, X);
  CHECK(a == b);
  REQUIRE(a.rows() == 2);
  REQUIRE(a.cols() == kNumClasses);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    CHECK(a.row(r).sum() == doctest::Approx(1.0).epsilon(1e-5));
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      CHECK(a(r, c) >= 0.0f);
      CHECK(a(r, c) <= 1.0f);
    }
  }
  // Inference on one row must not trip any batch-size restriction.
  const MlpMat<float> one = mlp_infer(model, MlpMat<float>(X.topRows(1)));
  CHECK(one.rows() == 1);
}

TEST_CASE("dropout requires a generator and a rate below one") {
  Rng rng(1);
  MlpModel<double> model = mlp_init<double>(3, {4}, 1);
  MlpMat<double> X = MlpMat<double>::Zero(2, 3);
  const std::vector<Label> labels{Label::offensive, Label::not_offensive};
  MlpParams<double> grads = mlp_zero_grads(model);
  CHECK_THROWS_AS((void)mlp_loss_and_grads<double>(model, X, labels, 0.5,
                                                   nullptr, grads, nullptr),
                  Error);
  CHECK_THROWS_AS((void)mlp_loss_and_grads<double>(model, X, labels, 1.0, &rng,
                                                   grads, nullptr),
                  Error);
  CHECK_THROWS_AS((void)mlp_loss_and_grads<double>(model, X, labels, -0.1, &rng,
                                                   grads, nullptr),
                  Error);
}

TEST_CASE("batches below two rows are rejected (batchnorm undefined)") {
  MlpModel<double> model = mlp_init<double>(3, {4}, 1);
  MlpMat<double> X = MlpMat<double>::Zero(1, 3);
  MlpParams<double> grads = mlp_zero_grads(model);
  CHECK_THROWS_AS((void)mlp_loss_and_grads<double>(model, X, {Label::offensive},
                                                   0.0, nullptr, grads, nullptr),
                  Error);
}

// --- the MLP head over embeddings -------------------------------------------

TEST_CASE("mlp head learns separable embeddings") {
  Rng rng(42);
  const int d = 10, n = 80;
  EmbeddingMatrix X(d, n);
  std::vector<Label> y;
  for (int i = 0; i < n; ++i) {
    const bool off = i % 2 == 0;
    for (int j = 0; j < d; ++j)
      X(j, i) = float((off ? 1.2 : -1.2) + 0.5 * rng.next_normal());
    y.push_back(off ? Label::offensive : Label::not_offensive);
  }

  MlpTrainOptions opts;
  opts.widths = {16};
  opts.epochs = 25;
  opts.batch_size = 16;
  opts.dropout = 0.2;
  opts.seed = 5;
  const HeadArtifact artifact = train_mlp_head(X, y, opts);

  CHECK(artifact.kind == HeadKind::mlp);
  CHECK(artifact.input_dim == d);
  const auto& losses = artifact.train_report["epoch_mean_loss"];
  REQUIRE(losses.size() == 25);
  CHECK(losses.back().get<double>() < losses.front().get<double>());

  const auto preds = predict_embeddings(artifact, X);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    correct += preds[i].label == y[i];
    REQUIRE(preds[i].score >= 0.5);
    REQUIRE(preds[i].score <= 1.0);
  }
  CHECK(double(correct) / double(n) >= 0.95);
}

TEST_CASE("mlp head training is seed-deterministic") {
  Rng rng(3);
  EmbeddingMatrix X(4, 20);
  std::vector<Label> y;
  for (int i = 0; i < 20; ++i) {
    const bool off = i < 10;
    for (int j = 0; j < 4; ++j)
      X(j, i) = float((off ? 1.0 : -1.0) + 0.3 * rng.next_normal());
    y.push_back(off ? Label::offensive : Label::not_offensive);
  }
  MlpTrainOptions opts;
  opts.widths = {6};
  opts.epochs = 5;
  opts.batch_size = 8;
  opts.seed = 77;
  const HeadArtifact a = train_mlp_head(X, y, opts);
  const HeadArtifact b = train_mlp_head(X, y, opts);
  CHECK(a.train_report == b.train_report);
  const auto pa = predict_embeddings(a, X);
  const auto pb = predict_embeddings(b, X);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].label == pb[i].label);
    CHECK(pa[i].score == pb[i].score);
  }

  MlpTrainOptions other = opts;
  other.seed = 78;
  const HeadArtifact c = train_mlp_head(X, y, other);
  CHECK(a.train_report != c.train_report);
}

TEST_CASE("a trailing undersized batch is skipped, not fatal") {
  Rng rng(12);
  EmbeddingMatrix X(3, 9);  // batch_size 4 -> batches of 4, 4, and 1 (skipped)
  std::vector<Label> y;
  for (int i = 0; i < 9; ++i) {
    const bool off = i % 2 == 0;
    for (int j = 0; j < 3; ++j) X(j, i) = off ? 1.0f : -1.0f;
    y.push_back(off ? Label::offensive : Label::not_offensive);
  }
  MlpTrainOptions opts;
  opts.widths = {4};
  opts.epochs = 2;
  opts.batch_size = 4;
  const HeadArtifact artifact = train_mlp_head(X, y, opts);
  CHECK(artifact.train_report["epoch_mean_loss"].size() == 2);
}

TEST_CASE("mlp training option validation") {
  EmbeddingMatrix X = EmbeddingMatrix::Random(3, 8);
  std::vector<Label> y;
  for (int i = 0; i < 8; ++i)
    y.push_back(i % 2 ? Label::offensive : Label::not_offensive);

  MlpTrainOptions opts;
  SUBCASE("dropout of one") {
    opts.dropout = 1.0;
    CHECK_THROWS_AS((void)train_mlp_head(X, y, opts), Error);
  }
  SUBCASE("empty widths") {
    opts.widths = {};
    CHECK_THROWS_AS((void)train_mlp_head(X, y, opts), Error);
  }
  SUBCASE("batch size below two") {
    opts.batch_size = 1;
    CHECK_THROWS_AS((void)train_mlp_head(X, y, opts), Error);
  }
}

}  // namespace
}  // namespace offmix
