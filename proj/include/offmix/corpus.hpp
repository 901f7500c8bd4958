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

#ifndef OFFMIX_CORPUS_HPP
#define OFFMIX_CORPUS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "offmix/label.hpp"

namespace offmix {

// One dataset row. `label` is absent for prediction-only inputs. Empty text
// is retained (the row is kept so id joins stay total); callers can flag it.
struct RawRecord {
  std::string id;
  std::string text;
  std::optional<Label> label;

  bool operator==(const RawRecord&) const = default;
};

struct DatasetSummary {
  std::size_t total = 0;
  std::size_t offensive = 0;
  std::size_t not_offensive = 0;
  std::size_t unlabeled = 0;
};

// Column layout of a delimited dataset file. An empty label_column means the
// file carries no gold labels.
struct CorpusSchema {
  std::string id_column = "id";
  std::string text_column = "text";
  std::string label_column = "label";
  char delimiter = '\t';
};

// Maps the label strings found in files onto canonical labels. Lookup is
// case-insensitive (ASCII).
class LabelMap {
 public:
  // {"off", "offensive"} -> OFFENSIVE,
  // {"not", "not-offensive", "not_offensive", "not offensive"} ->
  // NOT_OFFENSIVE, plus the canonical serializations themselves.
  static LabelMap defaults();

  void add(const std::string& text, Label label);
  std::optional<Label> lookup(const std::string& text) const;

 private:
  std::map<std::string, Label> entries_;
};

// Parses a delimited UTF-8 file with a header row. Comma-delimited files may
// quote fields RFC-4180 style; tab-delimited fields must not contain tabs or
// newlines. Throws a data error on a missing file, a missing declared column,
// an unmappable label string (all offending row numbers listed), or a
// duplicate id (both row numbers listed).
std::vector<RawRecord> load_dataset(const std::filesystem::path& path,
                                    const CorpusSchema& schema,
                                    const LabelMap& label_map);

// Writes records in the schema's column order (id, text, label) with a header
// row. Labels are serialized canonically. Inverse of load_dataset for
// well-formed records.
void save_dataset(const std::vector<RawRecord>& records,
                  const std::filesystem::path& path,
                  const CorpusSchema& schema);

DatasetSummary summarize(const std::vector<RawRecord>& records);

// One-line JSON document with keys total/offensive/not_offensive/unlabeled.
std::string summary_json(const DatasetSummary& s);

}  // namespace offmix

#endif  // OFFMIX_CORPUS_HPP
