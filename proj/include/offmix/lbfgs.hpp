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

#ifndef OFFMIX_LBFGS_HPP
#define OFFMIX_LBFGS_HPP

#include <Eigen/Core>
#include <cmath>
#include <deque>

#include "offmix/error.hpp"

// Limited-memory BFGS with Armijo backtracking, for smooth objectives.
// The objective is any callable `Scalar f(const Vec& x, Vec& grad)` that
// fills `grad` (already sized) and returns the value at x.
namespace offmix {

template <typename Scalar>
struct LbfgsOptions {
  int max_iters = 500;
  int history = 10;
  Scalar grad_tol = Scalar(1e-8);   // on the infinity norm of the gradient
  Scalar f_tol = Scalar(1e-12);     // relative objective decrease
  int max_line_search = 50;
};

template <typename Scalar>
struct LbfgsResult {
  Scalar value = Scalar(0);
  int iterations = 0;
  bool converged = false;
};

template <typename Scalar, typename F>
LbfgsResult<Scalar> lbfgs_minimize(
    F&& objective, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
    const LbfgsOptions<Scalar>& opts = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = x.size();
  if (n == 0) throw_usage("cannot optimize a zero-dimensional problem");

  Vec grad(n), grad_new(n), direction(n), x_new(n);
  Scalar f = objective(x, grad);

  struct Pair {
    Vec s, y;
    Scalar rho;
  };
  std::deque<Pair> memory;

  LbfgsResult<Scalar> result;
  result.value = f;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Scalar gnorm = grad.template lpNorm<Eigen::Infinity>();
    if (gnorm <= opts.grad_tol *
                     std::max(Scalar(1), x.template lpNorm<Eigen::Infinity>())) {
      result.converged = true;
      break;
    }

    // Two-loop recursion for the search direction.
    direction = -grad;
    std::vector<Scalar> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      alpha[i] = memory[i].rho * memory[i].s.dot(direction);
      direction -= alpha[i] * memory[i].y;
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      direction *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const Scalar beta = memory[i].rho * memory[i].y.dot(direction);
      direction += (alpha[i] - beta) * memory[i].s;
    }

    Scalar dir_deriv = grad.dot(direction);
    if (!(dir_deriv < Scalar(0))) {  // not a descent direction: restart
      memory.clear();
      direction = -grad;
      dir_deriv = grad.dot(direction);
    }

    // Backtracking line search with the Armijo sufficient-decrease test.
    Scalar step = (iter == 0 && memory.empty())
                      ? std::min(Scalar(1), Scalar(1) / gnorm)
                      : Scalar(1);
    const Scalar c1 = Scalar(1e-4);
    Scalar f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < opts.max_line_search; ++ls) {
      x_new = x + step * direction;
      f_new = objective(x_new, grad_new);
      if (std::isfinite(f_new) && f_new <= f + c1 * step * dir_deriv) {
        accepted = true;
        break;
      }
      step *= Scalar(0.5);
    }
    if (!accepted) break;  // no further progress possible at this scale

    Pair pair;
    pair.s = x_new - x;
    pair.y = grad_new - grad;
    const Scalar sy = pair.s.dot(pair.y);
    if (sy > Scalar(1e-10) * pair.s.norm() * pair.y.norm()) {
      pair.rho = Scalar(1) / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > opts.history) memory.pop_front();
    }

    x.swap(x_new);
    grad.swap(grad_new);
    result.iterations = iter + 1;
    const Scalar decrease = f - f_new;
    f = f_new;
    result.value = f;
    if (decrease <= opts.f_tol * std::max(Scalar(1), std::abs(f))) {
      result.converged = true;
      break;
    }
  }
  result.value = f;
  return result;
}

}  // namespace offmix

#endif  // OFFMIX_LBFGS_HPP
