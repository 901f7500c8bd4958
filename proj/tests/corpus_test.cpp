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

#include "offmix/corpus.hpp"

#include <string>

#include "doctest.h"
#include "offmix/error.hpp"
#include "test_support.hpp"

namespace offmix {
namespace {

using testing::TempDir;
using testing::write_file;

TEST_CASE("loads a HASOC-style tab-separated file") {
  TempDir dir;
  const auto path = dir / "train.tsv";
  write_file(path,
             "id\ttext\tlabel\n"
             "c1\tsemma padam\tNOT\n"
             "c2\tmokka movie\tOFF\n"
             "c3\tno label yet\t\n");
  const auto records = load_dataset(path, CorpusSchema{}, LabelMap::defaults());
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "c1");
  CHECK(records[0].text == "semma padam");
  CHECK(records[0].label == Label::not_offensive);
  CHECK(records[1].label == Label::offensive);
  CHECK_FALSE(records[2].label.has_value());
}

TEST_CASE("label strings map case-insensitively") {
  TempDir dir;
  const auto path = dir / "train.tsv";
  write_file(path,
             "id\ttext\tlabel\n"
             "a\tx\toff\n"
             "b\tx\tOffensive\n"
             "c\tx\tNOT_OFFENSIVE\n"
             "d\tx\tnot-offensive\n");
  const auto records = load_dataset(path, CorpusSchema{}, LabelMap::defaults());
  CHECK(records[0].label == Label::offensive);
  CHECK(records[1].label == Label::offensive);
  CHECK(records[2].label == Label::not_offensive);
  CHECK(records[3].label == Label::not_offensive);
}

TEST_CASE("comma files support RFC-4180 quoting") {
  TempDir dir;
  const auto path = dir / "train.csv";
  write_file(path,
             "comment_id,body,class\n"
             "r1,\"hello, \"\"world\"\"\",OFF\n"
             "r2,\"two\nlines\",NOT\n");
  CorpusSchema schema;
  schema.delimiter = ',';
  schema.id_column = "comment_id";
  schema.text_column = "body";
  schema.label_column = "class";
  const auto records = load_dataset(path, schema, LabelMap::defaults());
  REQUIRE(records.size() == 2);
  CHECK(records[0].text == "hello, \"world\"");
  CHECK(records[1].text == "two\nlines");
}

TEST_CASE("extra columns and column order do not matter") {
  TempDir dir;
  const auto path = dir / "train.tsv";
  write_file(path,
             "label\textra\tid\ttext\n"
             "OFF\tzz\tk1\tsome text\n");
  const auto records = load_dataset(path, CorpusSchema{}, LabelMap::defaults());
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "k1");
  CHECK(records[0].text == "some text");
  CHECK(records[0].label == Label::offensive);
}

TEST_CASE("schema without a label column loads unlabeled records") {
  TempDir dir;
  const auto path = dir / "pred.tsv";
  write_file(path, "id\ttext\np1\thello\n");
  CorpusSchema schema;
  schema.label_column.clear();
  const auto records = load_dataset(path, schema, LabelMap::defaults());
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].label.has_value());
}

TEST_CASE("load errors carry row context") {
  TempDir dir;
  LabelMap labels = LabelMap::defaults();

  SUBCASE("duplicate ids name both rows") {
    const auto path = dir / "dup.tsv";
    write_file(path, "id\ttext\tlabel\nx\ta\tOFF\nx\tb\tNOT\n");
    CHECK_THROWS_WITH_AS(load_dataset(path, CorpusSchema{}, labels),
                         doctest::Contains("rows 2 and 3"), Error);
  }
  SUBCASE("unmappable labels list the offending rows") {
    const auto path = dir / "bad.tsv";
    write_file(path, "id\ttext\tlabel\na\tx\tOFF\nb\tx\tmaybe\nc\tx\tdunno\n");
    CHECK_THROWS_WITH_AS(load_dataset(path, CorpusSchema{}, labels),
                         doctest::Contains("rows: 3, 4"), Error);
  }
  SUBCASE("missing declared column") {
    const auto path = dir / "cols.tsv";
    write_file(path, "id\tbody\tlabel\na\tx\tOFF\n");
    CHECK_THROWS_WITH_AS(load_dataset(path, CorpusSchema{}, labels),
                         doctest::Contains("\"text\" not found"), Error);
  }
  SUBCASE("short row") {
    const auto path = dir / "short.tsv";
    write_file(path, "id\ttext\tlabel\na\tx\tOFF\nb\n");
    CHECK_THROWS_AS(load_dataset(path, CorpusSchema{}, labels), Error);
  }
  SUBCASE("empty id") {
    const auto path = dir / "noid.tsv";
    write_file(path, "id\ttext\tlabel\n\tx\tOFF\n");
    CHECK_THROWS_AS(load_dataset(path, CorpusSchema{}, labels), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_dataset(dir / "nope.tsv", CorpusSchema{}, labels),
                    Error);
  }
  SUBCASE("empty file") {
    const auto path = dir / "empty.tsv";
    write_file(path, "");
    CHECK_THROWS_AS(load_dataset(path, CorpusSchema{}, labels), Error);
  }
}

TEST_CASE("a UTF-8 BOM before the header is tolerated") {
  TempDir dir;
  const auto path = dir / "bom.tsv";
  write_file(path, "\xEF\xBB\xBFid\ttext\tlabel\nb1\they\tNOT\n");
  const auto records = load_dataset(path, CorpusSchema{}, LabelMap::defaults());
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "b1");
}

TEST_CASE("save then load round-trips records") {
  TempDir dir;
  std::vector<RawRecord> records{
      {"r1", "semma padam", Label::not_offensive},
      {"r2", "mokka", Label::offensive},
      {"r3", "unlabeled text", std::nullopt},
  };
  SUBCASE("tab-delimited") {
    const auto path = dir / "out.tsv";
    save_dataset(records, path, CorpusSchema{});
    CHECK(load_dataset(path, CorpusSchema{}, LabelMap::defaults()) == records);
  }
  SUBCASE("comma-delimited with fields needing quotes") {
    records[0].text = "has, comma and \"quotes\"";
    CorpusSchema schema;
    schema.delimiter = ',';
    const auto path = dir / "out.csv";
    save_dataset(records, path, schema);
    CHECK(load_dataset(path, schema, LabelMap::defaults()) == records);
  }
  SUBCASE("tab-delimited refuses unrepresentable fields") {
    records[0].text = "tab\there";
    CHECK_THROWS_AS(save_dataset(records, dir / "out.tsv", CorpusSchema{}),
                    Error);
  }
}

TEST_CASE("summarize counts labels") {
  const std::vector<RawRecord> records{
      {"a", "x", Label::offensive},
      {"b", "x", Label::not_offensive},
      {"c", "x", Label::not_offensive},
      {"d", "x", std::nullopt},
  };
  const DatasetSummary s = summarize(records);
  CHECK(s.total == 4);
  CHECK(s.offensive == 1);
  CHECK(s.not_offensive == 2);
  CHECK(s.unlabeled == 1);
  CHECK(summary_json(s) ==
        "{\"total\":4,\"offensive\":1,\"not_offensive\":2,\"unlabeled\":1}");
}

TEST_CASE("the shipped toy corpus loads with the default schema") {
  const auto records =
      load_dataset(testing::source_root() / "data" / "toy" / "train.tsv",
                   CorpusSchema{}, LabelMap::defaults());
  REQUIRE(records.size() == 400);
  const DatasetSummary s = summarize(records);
  CHECK(s.offensive == 200);
  CHECK(s.not_offensive == 200);
  CHECK(s.unlabeled == 0);
}

}  // namespace
}  // namespace offmix
