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

#ifndef OFFMIX_FOLDS_HPP
#define OFFMIX_FOLDS_HPP

#include <cstdint>
#include <vector>

namespace offmix {

// Cross-validation split: assignment[i] is the fold of record i.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

// Random balanced k-fold split of n records: every record lands in exactly
// one fold and fold sizes differ by at most one. Deterministic in `seed`.
FoldPlan make_folds(std::size_t n, int k, std::uint64_t seed);

}  // namespace offmix

#endif  // OFFMIX_FOLDS_HPP
