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

#include "offmix/config.hpp"

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "offmix/error.hpp"
#include "test_support.hpp"

namespace offmix {
namespace {

using testing::TempDir;
using testing::write_file;

TEST_CASE("defaults load and digest deterministically") {
  const PipelineConfig a, b;
  CHECK(a.digest() == b.digest());
  CHECK(a.digest().size() == 16);
  for (char c : a.digest())
    CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
}

TEST_CASE("config files parse key = value with comments") {
  TempDir dir;
  const auto path = dir / "a.conf";
  write_file(path,
             "# pipeline settings\n"
             "\n"
             "encoder.kind = stub\n"
             "encoder.stub_dim = 48\n"
             "head.svm.c = 2.5\n"
             "seed = 7\n");
  const PipelineConfig c = PipelineConfig::load(path);
  CHECK(c.encoder.kind == EncoderKind::deterministic_stub);
  CHECK(c.encoder.stub_dim == 48);
  CHECK(c.svm.c == 2.5);
  CHECK(c.seed == 7);
}

TEST_CASE("unknown keys are usage errors naming the location") {
  TempDir dir;
  const auto path = dir / "a.conf";
  write_file(path, "seed = 1\nencoder.knid = stub\n");
  CHECK_THROWS_WITH_AS(PipelineConfig::load(path),
                       doctest::Contains("encoder.knid"), Error);
}

TEST_CASE("malformed lines and values are usage errors") {
  PipelineConfig c;
  CHECK_THROWS_AS(c.set("encoder.kind", "banana"), Error);
  CHECK_THROWS_AS(c.set("corpus.delimiter", "semicolon"), Error);
  CHECK_THROWS_AS(c.set("head.svm.c", "0"), Error);
  CHECK_THROWS_AS(c.set("head.svm.c", "abc"), Error);
  CHECK_THROWS_AS(c.set("head.svm.folds", "1"), Error);
  CHECK_THROWS_AS(c.set("head.mlp.dropout", "1"), Error);
  CHECK_THROWS_AS(c.set("head.mlp.dropout", "-0.1"), Error);
  CHECK_THROWS_AS(c.set("head.mlp.widths", ""), Error);
  CHECK_THROWS_AS(c.set("head.mlp.widths", "128,0"), Error);
  CHECK_THROWS_AS(c.set("head.mlp.batch_size", "1"), Error);
  CHECK_THROWS_AS(c.set("encoder.max_len", "1"), Error);
  CHECK_THROWS_AS(c.set("encoder.stub_dim", "0"), Error);
  CHECK_THROWS_AS(c.set("seed", "not-a-number"), Error);

  TempDir dir;
  write_file(dir / "bad.conf", "just some words\n");
  CHECK_THROWS_AS(PipelineConfig::load(dir / "bad.conf"), Error);
}

TEST_CASE("digest changes for every semantically meaningful key") {
  const std::vector<std::pair<std::string, std::string>> changes = {
      {"corpus.delimiter", "comma"},
      {"corpus.id_column", "comment_id"},
      {"corpus.text_column", "body"},
      {"corpus.label_column", "class"},
      {"prep.lexicon", "other/lexicon.tsv"},
      {"encoder.kind", "pretrained"},
      {"encoder.model_id", "some-other-model"},
      {"encoder.weights", "w.bin"},
      {"encoder.vocab", "v.txt"},
      {"encoder.max_len", "64"},
      {"encoder.batch_size", "8"},
      {"encoder.stub_dim", "128"},
      {"head.svm.c", "0.5"},
      {"head.svm.mode", "logreg"},
      {"head.svm.folds", "5"},
      {"head.svm.max_iters", "100"},
      {"head.mlp.widths", "64,32"},
      {"head.mlp.dropout", "0.5"},
      {"head.mlp.lr", "0.01"},
      {"head.mlp.epochs", "3"},
      {"head.mlp.batch_size", "16"},
      {"head.finetune.lr", "0.001"},
      {"head.finetune.epochs", "1"},
      {"head.finetune.batch_size", "4"},
      {"seed", "43"},
  };
  const std::string base = PipelineConfig{}.digest();
  std::set<std::string> digests{base};
  for (const auto& [key, value] : changes) {
    CAPTURE(key);
    PipelineConfig c;
    c.set(key, value);
    const std::string d = c.digest();
    CHECK(d != base);
    // Every single-key change lands on its own digest.
    CHECK(digests.insert(d).second);
  }
}

TEST_CASE("out_dir does not influence the digest") {
  PipelineConfig a, b;
  b.set("out_dir", "/somewhere/else");
  CHECK(a.digest() == b.digest());
  CHECK(b.out_dir == "/somewhere/else");
}

TEST_CASE("canonical form re-applies to an identical configuration") {
  PipelineConfig c;
  c.set("encoder.kind", "pretrained");
  c.set("encoder.weights", "w.bin");
  c.set("head.mlp.widths", "64,32");
  c.set("head.svm.c", "0.25");
  c.set("seed", "9");

  PipelineConfig rebuilt;
  std::istringstream lines(c.canonical());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    rebuilt.set(line.substr(0, eq), line.substr(eq + 1));
  }
  CHECK(rebuilt.digest() == c.digest());
  CHECK(c.canonical().find("out_dir") == std::string::npos);
}

TEST_CASE("stage seeds are fixed offsets from the top-level seed") {
  PipelineConfig c;
  c.seed = 100;
  CHECK(fold_seed(c) == 101);
  CHECK(mlp_seed(c) == 102);
  CHECK(stub_seed(c) == 103);
  CHECK(finetune_seed(c) == 104);
}

TEST_CASE("missing config file is a usage error") {
  CHECK_THROWS_AS(PipelineConfig::load("/nonexistent/x.conf"), Error);
}

TEST_CASE("the shipped example configs load") {
  const auto configs = testing::source_root() / "configs";
  const PipelineConfig toy = PipelineConfig::load(configs / "toy_stub.conf");
  CHECK(toy.encoder.kind == EncoderKind::deterministic_stub);
  CHECK(toy.encoder.stub_dim == 64);
  const PipelineConfig full =
      PipelineConfig::load(configs / "hasoc_pretrained.conf");
  CHECK(full.encoder.kind == EncoderKind::pretrained_multilingual);
  CHECK(full.finetune.epochs == 2);
}

}  // namespace
}  // namespace offmix
