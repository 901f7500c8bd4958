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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "offmix/error.hpp"

namespace offmix {

namespace {

std::string ascii_lower(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Splits the next record off `input` starting at `pos`. Quoted fields (only
// meaningful for comma files) may contain delimiters, doubled quotes, and
// newlines. Returns false at end of input.
bool next_record(const std::string& input, std::size_t& pos, char delimiter,
                 std::vector<std::string>& fields) {
  fields.clear();
  if (pos >= input.size()) return false;
  std::string field;
  bool in_quotes = false;
  bool quoted_field = false;
  for (;;) {
    if (pos >= input.size()) {
      fields.push_back(std::move(field));
      return true;
    }
    char c = input[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < input.size() && input[pos + 1] == '"') {
          field += '"';
          pos += 2;
        } else {
          in_quotes = false;
          ++pos;
        }
      } else {
        field += c;
        ++pos;
      }
      continue;
    }
    if (c == '"' && delimiter == ',' && field.empty() && !quoted_field) {
      in_quotes = true;
      quoted_field = true;
      ++pos;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
      quoted_field = false;
      ++pos;
    } else if (c == '\n' || c == '\r') {
      fields.push_back(std::move(field));
      ++pos;
      if (c == '\r' && pos < input.size() && input[pos] == '\n') ++pos;
      return true;
    } else {
      field += c;
      ++pos;
    }
  }
}

std::string quote_if_needed(const std::string& field, char delimiter) {
  bool needs_quotes = field.find(delimiter) != std::string::npos ||
                      field.find('"') != std::string::npos ||
                      field.find('\n') != std::string::npos ||
                      field.find('\r') != std::string::npos;
  if (!needs_quotes) return field;
  if (delimiter == '\t')
    throw_data("field contains a tab or newline; not representable in a "
               "tab-delimited file: \"" + field + "\"");
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';  // RFC 4180: double each embedded quote
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

LabelMap LabelMap::defaults() {
  LabelMap m;
  m.add("off", Label::offensive);
  m.add("offensive", Label::offensive);
  m.add("not", Label::not_offensive);
  m.add("not-offensive", Label::not_offensive);
  m.add("not_offensive", Label::not_offensive);
  m.add("not offensive", Label::not_offensive);
  return m;
}

void LabelMap::add(const std::string& text, Label label) {
  entries_[ascii_lower(text)] = label;
}

std::optional<Label> LabelMap::lookup(const std::string& text) const {
  auto it = entries_.find(ascii_lower(text));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<RawRecord> load_dataset(const std::filesystem::path& path,
                                    const CorpusSchema& schema,
                                    const LabelMap& label_map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open dataset file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();

  // Strip a UTF-8 BOM if present.
  if (content.size() >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0)
    content.erase(0, 3);

  std::size_t pos = 0;
  std::vector<std::string> fields;
  if (!next_record(content, pos, schema.delimiter, fields))
    throw_data("dataset file is empty (no header row): " + path.string());

  const bool want_label = !schema.label_column.empty();
  int id_col = -1, text_col = -1, label_col = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == schema.id_column) id_col = static_cast<int>(i);
    if (fields[i] == schema.text_column) text_col = static_cast<int>(i);
    if (want_label && fields[i] == schema.label_column)
      label_col = static_cast<int>(i);
  }
  if (id_col < 0)
    throw_data("column \"" + schema.id_column + "\" not found in header of " +
               path.string());
  if (text_col < 0)
    throw_data("column \"" + schema.text_column + "\" not found in header of " +
               path.string());
  if (want_label && label_col < 0)
    throw_data("column \"" + schema.label_column + "\" not found in header of " +
               path.string());

  std::vector<RawRecord> records;
  std::unordered_map<std::string, std::size_t> seen_ids;  // id -> row number
  std::vector<std::size_t> bad_label_rows;
  std::string first_bad_label;
  std::size_t row = 1;  // header was row 1
  while (next_record(content, pos, schema.delimiter, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    const int max_needed = std::max(id_col, std::max(text_col, label_col));
    if (static_cast<int>(fields.size()) <= max_needed)
      throw_data("row " + std::to_string(row) + " of " + path.string() +
                 " has " + std::to_string(fields.size()) +
                 " fields; expected at least " + std::to_string(max_needed + 1));

    RawRecord rec;
    rec.id = fields[static_cast<std::size_t>(id_col)];
    rec.text = fields[static_cast<std::size_t>(text_col)];
    if (rec.id.empty())
      throw_data("row " + std::to_string(row) + " of " + path.string() +
                 " has an empty id");

    auto [it, inserted] = seen_ids.emplace(rec.id, row);
    if (!inserted)
      throw_data("duplicate id \"" + rec.id + "\" in " + path.string() +
                 " (rows " + std::to_string(it->second) + " and " +
                 std::to_string(row) + ")");

    if (want_label) {
      const std::string& raw = fields[static_cast<std::size_t>(label_col)];
      if (!raw.empty()) {
        auto mapped = label_map.lookup(raw);
        if (!mapped) {
          if (bad_label_rows.empty()) first_bad_label = raw;
          bad_label_rows.push_back(row);
        } else {
          rec.label = *mapped;
        }
      }
    }
    records.push_back(std::move(rec));
  }

  if (!bad_label_rows.empty()) {
    std::string rows_list;
    for (std::size_t i = 0; i < bad_label_rows.size() && i < 20; ++i) {
      if (i) rows_list += ", ";
      rows_list += std::to_string(bad_label_rows[i]);
    }
    if (bad_label_rows.size() > 20) rows_list += ", ...";
    throw_data("unmappable label string (first: \"" + first_bad_label +
               "\") in " + path.string() + " at rows: " + rows_list);
  }
  return records;
}

void save_dataset(const std::vector<RawRecord>& records,
                  const std::filesystem::path& path,
                  const CorpusSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot write dataset file: " + path.string());
  const char d = schema.delimiter;
  out << schema.id_column << d << schema.text_column;
  const bool want_label = !schema.label_column.empty();
  if (want_label) out << d << schema.label_column;
  out << '\n';
  for (const RawRecord& rec : records) {
    out << quote_if_needed(rec.id, d) << d << quote_if_needed(rec.text, d);
    if (want_label) {
      out << d;
      if (rec.label) out << to_string(*rec.label);
    }
    out << '\n';
  }
  if (!out) throw_data("write failed: " + path.string());
}

DatasetSummary summarize(const std::vector<RawRecord>& records) {
  DatasetSummary s;
  s.total = records.size();
  for (const RawRecord& rec : records) {
    if (!rec.label)
      ++s.unlabeled;
    else if (*rec.label == Label::offensive)
      ++s.offensive;
    else
      ++s.not_offensive;
  }
  return s;
}

std::string summary_json(const DatasetSummary& s) {
  nlohmann::ordered_json j;
  j["total"] = s.total;
  j["offensive"] = s.offensive;
  j["not_offensive"] = s.not_offensive;
  j["unlabeled"] = s.unlabeled;
  return j.dump();
}

}  // namespace offmix
