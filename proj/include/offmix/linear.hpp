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

#ifndef OFFMIX_LINEAR_HPP
#define OFFMIX_LINEAR_HPP

#include <Eigen/Core>
#include <cmath>

#include "offmix/error.hpp"
#include "offmix/lbfgs.hpp"

// Binary linear classifiers trained by smooth unconstrained minimization.
// Labels are +1/-1. Both objectives use the mean of the per-example loss,
//
//   F(w, b) = 0.5 * ||w||^2 + c * (1/n) * sum_i loss(y_i * (w.x_i + b)),
//
// so the optimum is invariant to duplicating the training set and `c` acts
// purely as the loss weight relative to the regularizer. The bias is not
// regularized.
namespace offmix {

enum class LinearObjective {
  squared_hinge,  // loss(m) = max(0, 1 - m)^2  (L2-SVM)
  logistic,       // loss(m) = log(1 + exp(-m))
};

template <typename Scalar>
struct LinearModel {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w;
  Scalar b = Scalar(0);

  Scalar margin(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>&
                    x) const {
    return w.dot(x) + b;
  }
};

template <typename Scalar>
struct LinearFitOptions {
  Scalar c = Scalar(1);
  LinearObjective objective = LinearObjective::squared_hinge;
  int max_iters = 500;
};

template <typename Scalar>
struct LinearFitResult {
  LinearModel<Scalar> model;
  Scalar objective_value = Scalar(0);
  int iterations = 0;
  bool converged = false;
};

// Numerically stable log(1 + exp(z)).
template <typename Scalar>
Scalar log1p_exp(Scalar z) {
  return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Objective and gradient at packed parameters [w; b]. Exposed so tests can
// check the analytic gradient against finite differences directly.
template <typename Scalar>
Scalar linear_objective(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& X,  // n x d
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,               // +/-1
    const LinearFitOptions<Scalar>& opts,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& params,          // d + 1
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& grad) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = X.rows(), d = X.cols();
  const auto w = params.head(d);
  const Scalar b = params[d];
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);

  Vec m = X * w;
  m.array() += b;
  const Vec ym = y.cwiseProduct(m);

  Scalar loss = Scalar(0);
  Vec dm(n);  // d(loss_total)/d(m_i), already scaled by c/n
  if (opts.objective == LinearObjective::squared_hinge) {
    const Vec h = (Scalar(1) - ym.array()).max(Scalar(0)).matrix();
    loss = h.squaredNorm();
    dm = Scalar(-2) * opts.c * inv_n * y.cwiseProduct(h);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) loss += log1p_exp(-ym[i]);
    // d/dm log(1+exp(-y m)) = -y * sigmoid(-y m)
    dm = (-opts.c * inv_n) *
         y.cwiseProduct(
             (Scalar(1) / (Scalar(1) + ym.array().exp())).matrix());
  }

  grad.head(d) = w + X.transpose() * dm;
  grad[d] = dm.sum();
  return Scalar(0.5) * w.squaredNorm() + opts.c * inv_n * loss;
}

template <typename Scalar>
LinearFitResult<Scalar> fit_linear(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& X,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
    const LinearFitOptions<Scalar>& opts = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (X.rows() == 0) throw_data("cannot fit a classifier on an empty dataset");
  if (X.rows() != y.size())
    throw_data("feature matrix and label vector sizes disagree");
  if (opts.c <= Scalar(0)) throw_usage("loss weight c must be positive");
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] > Scalar(0)) has_pos = true;
    else if (y[i] < Scalar(0)) has_neg = true;
    else throw_data("labels must be +1 or -1");
  }
  if (!has_pos || !has_neg)
    throw_data("training data contains only one class; cannot fit a binary "
               "classifier");

  Vec params = Vec::Zero(X.cols() + 1);
  LbfgsOptions<Scalar> lopts;
  lopts.max_iters = opts.max_iters;
  auto fn = [&](const Vec& p, Vec& g) {
    return linear_objective(X, y, opts, p, g);
  };
  const LbfgsResult<Scalar> lr = lbfgs_minimize<Scalar>(fn, params, lopts);

  LinearFitResult<Scalar> result;
  result.model.w = params.head(X.cols());
  result.model.b = params[X.cols()];
  result.objective_value = lr.value;
  result.iterations = lr.iterations;
  result.converged = lr.converged;
  return result;
}

}  // namespace offmix

#endif  // OFFMIX_LINEAR_HPP
