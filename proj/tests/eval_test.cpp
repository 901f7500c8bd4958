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
#include <vector>

#include "doctest.h"
#include "offmix/error.hpp"
#include "offmix/rng.hpp"
#include "test_support.hpp"

namespace offmix {
namespace {

// ---------------------------------------------------------------------------
// Independent oracle: per-class precision/recall/F1 straight from the metric
// definitions, counting pairs directly (no confusion matrix), with the
// 0-when-undefined convention. Weighted averages are support-weighted.
// ---------------------------------------------------------------------------

struct OracleResult {
  double p[2], r[2], f[2];
  long support[2];
  double wp, wr, wf;
};

OracleResult oracle_metrics(const std::vector<Label>& gold,
                            const std::vector<Label>& pred) {
  OracleResult o{};
  const long n = static_cast<long>(gold.size());
  for (int c = 0; c < 2; ++c) {
    const Label me = label_from_index(c);
    long tp = 0, pred_pos = 0, gold_pos = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == me) ++pred_pos;
      if (gold[i] == me) ++gold_pos;
      if (gold[i] == me && pred[i] == me) ++tp;
    }
    o.support[c] = gold_pos;
    o.p[c] = pred_pos == 0 ? 0.0 : double(tp) / double(pred_pos);
    o.r[c] = gold_pos == 0 ? 0.0 : double(tp) / double(gold_pos);
    const double denom = o.p[c] + o.r[c];
    o.f[c] = denom == 0.0 ? 0.0 : 2.0 * o.p[c] * o.r[c] / denom;
  }
  if (n > 0) {
    for (int c = 0; c < 2; ++c) {
      o.wp += double(o.support[c]) / n * o.p[c];
      o.wr += double(o.support[c]) / n * o.r[c];
      o.wf += double(o.support[c]) / n * o.f[c];
    }
  }
  return o;
}

EvalReport eval_lists(const std::vector<Label>& gold,
                      const std::vector<Label>& pred) {
  return evaluate(confusion(gold, pred));
}

TEST_CASE("hand-worked fixture: one offensive comment missed") {
  // gold OFF OFF NOT NOT, predicted OFF NOT NOT NOT.
  // OFFENSIVE:     tp=1 fp=0 fn=1 -> P=1, R=1/2, F1=2/3, support 2
  // NOT_OFFENSIVE: tp=2 fp=1 fn=0 -> P=2/3, R=1, F1=4/5, support 2
  // weighted P = 5/6, R = 3/4, F1 = (2/3 + 4/5)/2 = 11/15
  const std::vector<Label> gold{Label::offensive, Label::offensive,
                                Label::not_offensive, Label::not_offensive};
  const std::vector<Label> pred{Label::offensive, Label::not_offensive,
                                Label::not_offensive, Label::not_offensive};
  const EvalReport rep = eval_lists(gold, pred);

  const auto& off = rep.per_class[class_index(Label::offensive)];
  CHECK(off.precision == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(off.recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(off.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(off.support == 2);

  const auto& not_off = rep.per_class[class_index(Label::not_offensive)];
  CHECK(not_off.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(not_off.recall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(not_off.f1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(not_off.support == 2);

  CHECK(std::abs(rep.weighted_precision - 5.0 / 6.0) < 1e-9);
  CHECK(std::abs(rep.weighted_recall - 0.75) < 1e-9);
  CHECK(std::abs(rep.weighted_f1 - 11.0 / 15.0) < 1e-9);
  CHECK(rep.n == 4);
}

TEST_CASE("matches the brute-force oracle on random lists") {
  Rng rng(7041);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + int(rng.next_below(50));
    std::vector<Label> gold, pred;
    // Every fourth trial pins one of the lists to a single class so the
    // absent-class divisions get exercised.
    const int mode = trial % 4;
    for (int i = 0; i < n; ++i) {
      gold.push_back(mode == 1 ? Label::offensive
                               : label_from_index(int(rng.next_below(2))));
      pred.push_back(mode == 2 ? Label::not_offensive
                               : label_from_index(int(rng.next_below(2))));
    }
    const OracleResult o = oracle_metrics(gold, pred);
    const EvalReport rep = eval_lists(gold, pred);
    for (int c = 0; c < 2; ++c) {
      REQUIRE(std::abs(rep.per_class[c].precision - o.p[c]) < 1e-9);
      REQUIRE(std::abs(rep.per_class[c].recall - o.r[c]) < 1e-9);
      REQUIRE(std::abs(rep.per_class[c].f1 - o.f[c]) < 1e-9);
      REQUIRE(rep.per_class[c].support == o.support[c]);
    }
    REQUIRE(std::abs(rep.weighted_precision - o.wp) < 1e-9);
    REQUIRE(std::abs(rep.weighted_recall - o.wr) < 1e-9);
    REQUIRE(std::abs(rep.weighted_f1 - o.wf) < 1e-9);
  }
}

TEST_CASE("metrics are invariant under joint permutation of the pairs") {
  Rng rng(99);
  std::vector<Label> gold, pred;
  for (int i = 0; i < 40; ++i) {
    gold.push_back(label_from_index(int(rng.next_below(2))));
    pred.push_back(label_from_index(int(rng.next_below(2))));
  }
  const EvalReport a = eval_lists(gold, pred);
  std::vector<std::size_t> order(gold.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<Label> gold2, pred2;
  for (std::size_t i : order) {
    gold2.push_back(gold[i]);
    pred2.push_back(pred[i]);
  }
  const EvalReport b = eval_lists(gold2, pred2);
  CHECK(a.weighted_precision == b.weighted_precision);
  CHECK(a.weighted_recall == b.weighted_recall);
  CHECK(a.weighted_f1 == b.weighted_f1);
}

TEST_CASE("degenerate inputs stay finite") {
  SUBCASE("empty lists") {
    const EvalReport rep = eval_lists({}, {});
    CHECK(rep.n == 0);
    CHECK(rep.weighted_f1 == 0.0);
    CHECK(rep.per_class[0].precision == 0.0);
  }
  SUBCASE("all gold one class, all predictions the other") {
    const EvalReport rep = eval_lists(
        {Label::offensive, Label::offensive},
        {Label::not_offensive, Label::not_offensive});
    CHECK(rep.weighted_precision == 0.0);
    CHECK(rep.weighted_recall == 0.0);
    CHECK(rep.weighted_f1 == 0.0);
    CHECK(std::isfinite(rep.weighted_f1));
  }
  SUBCASE("length mismatch is a data error") {
    CHECK_THROWS_AS(confusion({Label::offensive}, {}), Error);
  }
}

TEST_CASE("round3 rounds half away from zero") {
  CHECK(round3(0.73349) == doctest::Approx(0.733).epsilon(1e-12));
  CHECK(round3(11.0 / 15.0) == doctest::Approx(0.733).epsilon(1e-12));
  CHECK(round3(2.0 / 3.0) == doctest::Approx(0.667).epsilon(1e-12));
  CHECK(round3(0.0) == 0.0);
  CHECK(round3(1.0) == 1.0);
  CHECK(round3(0.6996) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(round3(-2.0 / 3.0) == doctest::Approx(-0.667).epsilon(1e-12));
}

// Reports built from two fixed confusion matrices; the golden files pin both
// the exact JSON bytes and the rendered table. The matrices are chosen so
// the weighted row displays 0.715/0.693/0.700 and 0.599/0.568/0.573.
TEST_CASE("report JSON and rendered table match the golden fixtures") {
  struct Fixture {
    const char* dataset;
    long a, b, c, d;  // counts[gold][pred] row-major
    const char* json_file;
    const char* table_file;
  };
  const Fixture fixtures[] = {
      {"manglish_dev", 209, 110, 187, 462, "report_manglish.json",
       "report_manglish_table.txt"},
      {"tanglish_dev", 234, 144, 276, 318, "report_tanglish.json",
       "report_tanglish_table.txt"},
  };
  for (const Fixture& fx : fixtures) {
    CAPTURE(fx.dataset);
    ConfusionMatrix cm;
    cm.counts = {{{fx.a, fx.b}, {fx.c, fx.d}}};
    const EvalReport rep = evaluate(cm);
    const nlohmann::ordered_json j =
        report_json(rep, fx.dataset, "svm", 42, "00000000deadbeef");

    const auto golden_dir = testing::source_root() / "tests" / "golden";
    CHECK(j.dump(2) + "\n" == testing::read_file(golden_dir / fx.json_file));
    CHECK(render_metrics_table(j) ==
          testing::read_file(golden_dir / fx.table_file));
  }
}

TEST_CASE("rendering a report without a table block is a data error") {
  nlohmann::json j;
  j["n"] = 4;
  CHECK_THROWS_AS((void)render_metrics_table(j), Error);
}

}  // namespace
}  // namespace offmix
