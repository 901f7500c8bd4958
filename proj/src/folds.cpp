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

#include "offmix/folds.hpp"

#include <numeric>
#include <string>

#include "offmix/error.hpp"
#include "offmix/rng.hpp"

namespace offmix {

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(i);
  return out;
}

FoldPlan make_folds(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw_usage("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(k))
    throw_usage("cannot split " + std::to_string(n) + " records into " +
                std::to_string(k) + " folds");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);

  // The first n % k folds take one extra record.
  FoldPlan plan;
  plan.k = k;
  plan.assignment.assign(n, -1);
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::size_t pos = 0;
  for (int fold = 0; fold < k; ++fold) {
    const std::size_t size = base + (static_cast<std::size_t>(fold) < extra);
    for (std::size_t j = 0; j < size; ++j)
      plan.assignment[perm[pos++]] = fold;
  }
  return plan;
}

}  // namespace offmix
