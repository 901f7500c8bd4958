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

#ifndef OFFMIX_EVAL_HPP
#define OFFMIX_EVAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "offmix/label.hpp"

namespace offmix {

struct ConfusionMatrix {
  // counts[gold class][predicted class]
  std::array<std::array<long, kNumClasses>, kNumClasses> counts{};

  void add(Label gold, Label pred) {
    ++counts[static_cast<std::size_t>(class_index(gold))]
            [static_cast<std::size_t>(class_index(pred))];
  }
  long total() const;
  long support(Label gold) const;
};

ConfusionMatrix confusion(const std::vector<Label>& gold,
                          const std::vector<Label>& pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct EvalReport {
  std::array<ClassMetrics, kNumClasses> per_class{};  // indexed by class_index
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  long n = 0;
};

// Per-class precision/recall/F1 plus support-weighted averages. A metric
// whose denominator is zero is reported as 0.
EvalReport evaluate(const ConfusionMatrix& cm);

// Decimal rounding to three places, half away from zero; used for the
// display block so rendered numbers match hand-rounded tables.
double round3(double x);

// Full-precision metrics plus a "table" block with the same numbers rounded
// to three decimals. Key order is fixed, so serializing the same report
// twice yields identical bytes.
nlohmann::ordered_json report_json(const EvalReport& report,
                                   const std::string& dataset,
                                   const std::string& head,
                                   std::uint64_t seed,
                                   const std::string& config_digest);

// Plain-text table from a report produced by report_json (uses the rounded
// display block).
std::string render_metrics_table(const nlohmann::json& report);

}  // namespace offmix

#endif  // OFFMIX_EVAL_HPP
