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

#ifndef OFFMIX_MLP_HPP
#define OFFMIX_MLP_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

#include "offmix/error.hpp"
#include "offmix/label.hpp"
#include "offmix/rng.hpp"

// Feed-forward classifier over sentence embeddings. Each hidden block is
// dense -> batch norm -> ReLU -> inverted dropout; the output layer is dense
// -> softmax over the two classes. Templated on the scalar so gradient tests
// can run the exact training code in double precision.
namespace offmix {

template <typename Scalar>
using MlpMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using MlpVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace mlpdetail {
constexpr double kBnEps = 1e-5;
}

template <typename Scalar>
struct MlpParams {
  struct Layer {
    MlpMat<Scalar> w;            // in x out
    MlpMat<Scalar> b;            // 1 x out
    MlpMat<Scalar> gamma, beta;  // 1 x out
  };
  std::vector<Layer> layers;
  MlpMat<Scalar> w_out;  // last_width x kNumClasses
  MlpMat<Scalar> b_out;  // 1 x kNumClasses

  // Fixed tensor order; serialization and Adam state walk it in lockstep.
  template <typename F>
  void for_each(F&& f) {
    for (auto& l : layers) { f(l.w); f(l.b); f(l.gamma); f(l.beta); }
    f(w_out); f(b_out);
  }
  template <typename F>
  void for_each(F&& f) const {
    const_cast<MlpParams*>(this)->for_each(
        [&](auto& t) { f(const_cast<const MlpMat<Scalar>&>(t)); });
  }
};

template <typename Scalar>
struct MlpModel {
  int input_dim = 0;
  std::vector<int> widths;
  MlpParams<Scalar> params;
  struct RunningStats {
    MlpMat<Scalar> mean, var;  // 1 x width
  };
  std::vector<RunningStats> running;  // one per hidden layer
};

// Batch statistics captured by a training-mode forward pass; feeds the
// running-average update.
template <typename Scalar>
struct MlpBatchStats {
  std::vector<MlpMat<Scalar>> mean, var;  // 1 x width each
};

template <typename Scalar>
MlpModel<Scalar> mlp_init(int input_dim, const std::vector<int>& widths,
                          std::uint64_t seed) {
  if (input_dim <= 0) throw_usage("mlp input dimension must be positive");
  if (widths.empty()) throw_usage("mlp needs at least one hidden layer");
  for (int w : widths)
    if (w <= 0) throw_usage("mlp hidden widths must be positive");

  Rng rng(seed);
  MlpModel<Scalar> model;
  model.input_dim = input_dim;
  model.widths = widths;
  int fan_in = input_dim;
  for (int width : widths) {
    typename MlpParams<Scalar>::Layer layer;
    const Scalar he = std::sqrt(Scalar(2) / static_cast<Scalar>(fan_in));
    layer.w.resize(fan_in, width);
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c)
        layer.w(r, c) = he * static_cast<Scalar>(rng.next_normal());
    layer.b = MlpMat<Scalar>::Zero(1, width);
    layer.gamma = MlpMat<Scalar>::Ones(1, width);
    layer.beta = MlpMat<Scalar>::Zero(1, width);
    model.params.layers.push_back(std::move(layer));
    model.running.push_back({MlpMat<Scalar>::Zero(1, width),
                             MlpMat<Scalar>::Ones(1, width)});
    fan_in = width;
  }
  const Scalar out_scale = std::sqrt(Scalar(1) / static_cast<Scalar>(fan_in));
  model.params.w_out.resize(fan_in, kNumClasses);
  for (Eigen::Index r = 0; r < model.params.w_out.rows(); ++r)
    for (Eigen::Index c = 0; c < model.params.w_out.cols(); ++c)
      model.params.w_out(r, c) =
          out_scale * static_cast<Scalar>(rng.next_normal());
  model.params.b_out = MlpMat<Scalar>::Zero(1, kNumClasses);
  return model;
}

template <typename Scalar>
MlpParams<Scalar> mlp_zero_grads(const MlpModel<Scalar>& model) {
  MlpParams<Scalar> g;
  for (const auto& l : model.params.layers) {
    typename MlpParams<Scalar>::Layer z;
    z.w = MlpMat<Scalar>::Zero(l.w.rows(), l.w.cols());
    z.b = MlpMat<Scalar>::Zero(1, l.b.cols());
    z.gamma = MlpMat<Scalar>::Zero(1, l.gamma.cols());
    z.beta = MlpMat<Scalar>::Zero(1, l.beta.cols());
    g.layers.push_back(std::move(z));
  }
  g.w_out = MlpMat<Scalar>::Zero(model.params.w_out.rows(),
                                 model.params.w_out.cols());
  g.b_out = MlpMat<Scalar>::Zero(1, model.params.b_out.cols());
  return g;
}

template <typename Scalar>
void softmax_rows_inplace(MlpMat<Scalar>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Scalar mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp().matrix();
    m.row(r) /= m.row(r).sum();
  }
}

// Mean cross-entropy over the batch plus parameter gradients, using
// training-mode batch norm (statistics of this batch). Does not mutate the
// model; `rng` may be null when dropout_rate is zero. When `stats` is
// non-null the per-layer batch statistics are stored there so the caller can
// fold them into the running averages.
template <typename Scalar>
Scalar mlp_loss_and_grads(const MlpModel<Scalar>& model,
                          const MlpMat<Scalar>& X,
                          const std::vector<Label>& labels,
                          Scalar dropout_rate, Rng* rng,
                          MlpParams<Scalar>& grads,
                          MlpBatchStats<Scalar>* stats) {
  const Eigen::Index B = X.rows();
  if (B < 2) throw_usage("mlp training batches need at least 2 examples");
  if (static_cast<std::size_t>(B) != labels.size())
    throw_data("batch and label sizes disagree");
  if (X.cols() != model.input_dim)
    throw_data("embedding dimension does not match the mlp input dimension");
  if (dropout_rate < Scalar(0) || dropout_rate >= Scalar(1))
    throw_usage("dropout rate must lie in [0, 1)");
  if (dropout_rate > Scalar(0) && rng == nullptr)
    throw_usage("dropout requires a random source");

  const std::size_t nl = model.params.layers.size();
  const Scalar eps = Scalar(mlpdetail::kBnEps);
  const Scalar keep = Scalar(1) - dropout_rate;

  // Forward, caching what backward needs. Column-wise scalings are written
  // as right-multiplication by a diagonal.
  std::vector<MlpMat<Scalar>> act_in(nl);   // input to each dense layer
  std::vector<MlpVec<Scalar>> rstd(nl);     // per-feature 1/sqrt(var+eps)
  std::vector<MlpMat<Scalar>> xhat(nl);
  std::vector<MlpMat<Scalar>> relu_in(nl);  // post-batchnorm pre-ReLU
  std::vector<MlpMat<Scalar>> drop_mask(nl);
  if (stats) {
    stats->mean.resize(nl);
    stats->var.resize(nl);
  }

  MlpMat<Scalar> a = X;
  for (std::size_t li = 0; li < nl; ++li) {
    const auto& l = model.params.layers[li];
    act_in[li] = a;
    MlpMat<Scalar> z = a * l.w;
    z.rowwise() += l.b.row(0);

    const MlpMat<Scalar> mean = z.colwise().mean();
    const MlpMat<Scalar> centered = z.rowwise() - mean.row(0);
    const MlpMat<Scalar> var =
        centered.array().square().matrix().colwise().sum() /
        static_cast<Scalar>(B);
    rstd[li] =
        (var.row(0).transpose().array() + eps).rsqrt().matrix();
    xhat[li] = centered * rstd[li].asDiagonal();
    if (stats) {
      stats->mean[li] = mean;
      stats->var[li] = var;
    }

    relu_in[li] = xhat[li] * l.gamma.row(0).transpose().asDiagonal();
    relu_in[li].rowwise() += l.beta.row(0);
    a = relu_in[li].cwiseMax(Scalar(0));

    if (dropout_rate > Scalar(0)) {
      drop_mask[li].resize(a.rows(), a.cols());
      for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
          drop_mask[li](r, c) =
              (static_cast<Scalar>(rng->next_double()) < keep)
                  ? Scalar(1) / keep
                  : Scalar(0);
      a = a.cwiseProduct(drop_mask[li]);
    }
  }

  MlpMat<Scalar> logits = a * model.params.w_out;
  logits.rowwise() += model.params.b_out.row(0);
  MlpMat<Scalar> probs = logits;
  softmax_rows_inplace(probs);

  Scalar loss = Scalar(0);
  MlpMat<Scalar> dlogits = probs;
  for (Eigen::Index r = 0; r < B; ++r) {
    const int cls = class_index(labels[static_cast<std::size_t>(r)]);
    loss -= std::log(std::max(probs(r, cls), Scalar(1e-30)));
    dlogits(r, cls) -= Scalar(1);
  }
  loss /= static_cast<Scalar>(B);
  dlogits /= static_cast<Scalar>(B);

  // Backward.
  grads.w_out += a.transpose() * dlogits;
  grads.b_out.row(0) += dlogits.colwise().sum();
  MlpMat<Scalar> d_a = dlogits * model.params.w_out.transpose();

  for (std::size_t li = nl; li-- > 0;) {
    const auto& l = model.params.layers[li];
    auto& g = grads.layers[li];

    if (dropout_rate > Scalar(0)) d_a = d_a.cwiseProduct(drop_mask[li]);
    const MlpMat<Scalar> relu_grad =
        (relu_in[li].array() > Scalar(0)).template cast<Scalar>().matrix();
    MlpMat<Scalar> d_relu_in = d_a.cwiseProduct(relu_grad);

    g.gamma.row(0) += d_relu_in.cwiseProduct(xhat[li]).colwise().sum();
    g.beta.row(0) += d_relu_in.colwise().sum();

    // Batch-norm backward (biased variance), per column:
    // dz = rstd/B * (B*dxhat - sum(dxhat) - xhat * sum(dxhat .* xhat))
    MlpMat<Scalar> dxhat =
        d_relu_in * l.gamma.row(0).transpose().asDiagonal();
    const MlpMat<Scalar> sum_dxhat = dxhat.colwise().sum();
    const MlpMat<Scalar> sum_dxhat_xhat =
        dxhat.cwiseProduct(xhat[li]).colwise().sum();
    MlpMat<Scalar> dz = dxhat * static_cast<Scalar>(B);
    dz.rowwise() -= sum_dxhat.row(0);
    dz -= xhat[li] * sum_dxhat_xhat.row(0).transpose().asDiagonal();
    dz = dz * (rstd[li] / static_cast<Scalar>(B)).asDiagonal();

    g.w += act_in[li].transpose() * dz;
    g.b.row(0) += dz.colwise().sum();
    d_a = dz * l.w.transpose();
  }
  return loss;
}

template <typename Scalar>
void mlp_update_running(MlpModel<Scalar>& model,
                        const MlpBatchStats<Scalar>& stats,
                        Scalar momentum = Scalar(0.9)) {
  for (std::size_t li = 0; li < model.running.size(); ++li) {
    model.running[li].mean = momentum * model.running[li].mean +
                             (Scalar(1) - momentum) * stats.mean[li];
    model.running[li].var = momentum * model.running[li].var +
                            (Scalar(1) - momentum) * stats.var[li];
  }
}

// Evaluation-mode forward: running statistics, no dropout. Returns class
// probabilities, one row per input row.
template <typename Scalar>
MlpMat<Scalar> mlp_infer(const MlpModel<Scalar>& model,
                         const MlpMat<Scalar>& X) {
  if (X.cols() != model.input_dim)
    throw_data("embedding dimension does not match the mlp input dimension");
  const Scalar eps = Scalar(mlpdetail::kBnEps);
  MlpMat<Scalar> a = X;
  for (std::size_t li = 0; li < model.params.layers.size(); ++li) {
    const auto& l = model.params.layers[li];
    const auto& run = model.running[li];
    MlpMat<Scalar> z = a * l.w;
    z.rowwise() += l.b.row(0);
    z.rowwise() -= run.mean.row(0);
    const MlpVec<Scalar> rstd =
        (run.var.row(0).transpose().array() + eps).rsqrt().matrix();
    MlpMat<Scalar> norm = z * rstd.asDiagonal();
    norm = norm * l.gamma.row(0).transpose().asDiagonal();
    norm.rowwise() += l.beta.row(0);
    a = norm.cwiseMax(Scalar(0));
  }
  MlpMat<Scalar> logits = a * model.params.w_out;
  logits.rowwise() += model.params.b_out.row(0);
  softmax_rows_inplace(logits);
  return logits;
}

// --- optimizer -------------------------------------------------------------

template <typename Scalar>
struct MlpAdamState {
  MlpParams<Scalar> m, v;
  long step = 0;
};

template <typename Scalar>
MlpAdamState<Scalar> mlp_adam_init(const MlpModel<Scalar>& model) {
  MlpAdamState<Scalar> s;
  s.m = mlp_zero_grads(model);
  s.v = mlp_zero_grads(model);
  return s;
}

template <typename Scalar>
void mlp_adam_step(MlpParams<Scalar>& params, const MlpParams<Scalar>& grads,
                   MlpAdamState<Scalar>& state, Scalar lr,
                   Scalar beta1 = Scalar(0.9), Scalar beta2 = Scalar(0.999),
                   Scalar eps = Scalar(1e-8)) {
  ++state.step;
  const Scalar bc1 = Scalar(1) - std::pow(beta1, Scalar(state.step));
  const Scalar bc2 = Scalar(1) - std::pow(beta2, Scalar(state.step));
  std::vector<MlpMat<Scalar>*> ps, ms, vs;
  std::vector<const MlpMat<Scalar>*> gs;
  params.for_each([&](MlpMat<Scalar>& t) { ps.push_back(&t); });
  state.m.for_each([&](MlpMat<Scalar>& t) { ms.push_back(&t); });
  state.v.for_each([&](MlpMat<Scalar>& t) { vs.push_back(&t); });
  grads.for_each([&](const MlpMat<Scalar>& t) { gs.push_back(&t); });
  for (std::size_t i = 0; i < ps.size(); ++i) {
    MlpMat<Scalar>& m = *ms[i];
    MlpMat<Scalar>& v = *vs[i];
    m = beta1 * m + (Scalar(1) - beta1) * (*gs[i]);
    v = (beta2 * v.array() + (Scalar(1) - beta2) * gs[i]->array().square())
            .matrix();
    ps[i]->array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  }
}

}  // namespace offmix

#endif  // OFFMIX_MLP_HPP
