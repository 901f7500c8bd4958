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

#ifndef OFFMIX_LABEL_HPP
#define OFFMIX_LABEL_HPP

#include <optional>
#include <string>
#include <string_view>

namespace offmix {

enum class Label : int { offensive = 0, not_offensive = 1 };

constexpr int kNumClasses = 2;

inline int class_index(Label l) { return static_cast<int>(l); }

inline Label label_from_index(int i) {
  return i == 0 ? Label::offensive : Label::not_offensive;
}

// Canonical serialization; round-trips exactly through label_from_canonical.
inline std::string to_string(Label l) {
  return l == Label::offensive ? "OFFENSIVE" : "NOT_OFFENSIVE";
}

inline std::optional<Label> label_from_canonical(std::string_view s) {
  if (s == "OFFENSIVE") return Label::offensive;
  if (s == "NOT_OFFENSIVE") return Label::not_offensive;
  return std::nullopt;
}

}  // namespace offmix

#endif  // OFFMIX_LABEL_HPP
