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

#include "offmix/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "offmix/error.hpp"

namespace offmix {

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts)
    for (long v : row) t += v;
  return t;
}

long ConfusionMatrix::support(Label gold) const {
  long t = 0;
  for (long v : counts[static_cast<std::size_t>(class_index(gold))]) t += v;
  return t;
}

ConfusionMatrix confusion(const std::vector<Label>& gold,
                          const std::vector<Label>& pred) {
  if (gold.size() != pred.size())
    throw_data("gold and prediction lists have different lengths (" +
               std::to_string(gold.size()) + " vs " +
               std::to_string(pred.size()) + ")");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) cm.add(gold[i], pred[i]);
  return cm;
}

EvalReport evaluate(const ConfusionMatrix& cm) {
  EvalReport report;
  report.n = cm.total();
  for (int c = 0; c < kNumClasses; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    long tp = cm.counts[ci][ci];
    long fp = 0, fn = 0;
    for (int o = 0; o < kNumClasses; ++o) {
      if (o == c) continue;
      fp += cm.counts[static_cast<std::size_t>(o)][ci];
      fn += cm.counts[ci][static_cast<std::size_t>(o)];
    }
    ClassMetrics& m = report.per_class[ci];
    m.support = tp + fn;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = m.support > 0 ? static_cast<double>(tp) / m.support : 0.0;
    const double pr = m.precision + m.recall;
    m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  }
  if (report.n > 0) {
    for (int c = 0; c < kNumClasses; ++c) {
      const ClassMetrics& m = report.per_class[static_cast<std::size_t>(c)];
      const double w = static_cast<double>(m.support) / report.n;
      report.weighted_precision += w * m.precision;
      report.weighted_recall += w * m.recall;
      report.weighted_f1 += w * m.f1;
    }
  }
  return report;
}

double round3(double x) {
  const double scaled = x * 1000.0;
  return (x >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5)) /
         1000.0;
}

namespace {

nlohmann::ordered_json class_json(const ClassMetrics& m, bool rounded) {
  nlohmann::ordered_json j;
  j["precision"] = rounded ? round3(m.precision) : m.precision;
  j["recall"] = rounded ? round3(m.recall) : m.recall;
  j["f1"] = rounded ? round3(m.f1) : m.f1;
  j["support"] = m.support;
  return j;
}

}  // namespace

nlohmann::ordered_json report_json(const EvalReport& report,
                                   const std::string& dataset,
                                   const std::string& head,
                                   std::uint64_t seed,
                                   const std::string& config_digest) {
  nlohmann::ordered_json j;
  j["dataset"] = dataset;
  j["head"] = head;
  j["seed"] = seed;
  j["config_digest"] = config_digest;
  j["n"] = report.n;

  for (bool rounded : {false, true}) {
    nlohmann::ordered_json block;
    nlohmann::ordered_json per_class;
    for (int c = 0; c < kNumClasses; ++c) {
      const Label label = label_from_index(c);
      per_class[to_string(label)] =
          class_json(report.per_class[static_cast<std::size_t>(c)], rounded);
    }
    block["per_class"] = std::move(per_class);
    nlohmann::ordered_json weighted;
    weighted["precision"] = rounded ? round3(report.weighted_precision)
                                    : report.weighted_precision;
    weighted["recall"] =
        rounded ? round3(report.weighted_recall) : report.weighted_recall;
    weighted["f1"] = rounded ? round3(report.weighted_f1) : report.weighted_f1;
    block["weighted"] = std::move(weighted);
    if (rounded)
      j["table"] = std::move(block);
    else {
      j["per_class"] = std::move(block["per_class"]);
      j["weighted"] = std::move(block["weighted"]);
    }
  }
  return j;
}

std::string render_metrics_table(const nlohmann::json& report) {
  if (!report.contains("table"))
    throw_data("metrics report has no display table block");
  const auto& table = report.at("table");
  const auto& per_class = table.at("per_class");

  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-15s %9s %9s %9s %9s\n", "class",
                "precision", "recall", "f1", "support");
  out << line;
  auto row = [&](const std::string& name, const nlohmann::json& m,
                 long support) {
    std::snprintf(line, sizeof(line), "%-15s %9.3f %9.3f %9.3f %9ld\n",
                  name.c_str(), m.at("precision").get<double>(),
                  m.at("recall").get<double>(), m.at("f1").get<double>(),
                  support);
    out << line;
  };
  for (int c = 0; c < kNumClasses; ++c) {
    const std::string name = to_string(label_from_index(c));
    const auto& m = per_class.at(name);
    row(name, m, m.at("support").get<long>());
  }
  row("weighted", table.at("weighted"), report.at("n").get<long>());
  return out.str();
}

}  // namespace offmix
