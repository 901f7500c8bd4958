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

#include <charconv>
#include <fstream>
#include <sstream>

#include "offmix/error.hpp"

namespace offmix {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw_usage("config key '" + key + "' expects an integer, got '" + value +
                "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw_usage("config key '" + key +
                "' expects a non-negative integer, got '" + value + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw_usage("config key '" + key + "' expects a number, got '" + value +
                "'");
  }
}

std::vector<int> parse_widths(const std::string& key,
                              const std::string& value) {
  std::vector<int> widths;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty())
      throw_usage("config key '" + key + "' has an empty width in '" + value +
                  "'");
    widths.push_back(parse_int(key, part));
  }
  if (widths.empty())
    throw_usage("config key '" + key + "' expects at least one width");
  return widths;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_widths(const std::vector<int>& widths) {
  std::string out;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(widths[i]);
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw_usage("cannot open config file: " + path.string());
  PipelineConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw_usage(path.string() + ":" + std::to_string(line_no) +
                  ": expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw_usage(path.string() + ":" + std::to_string(line_no) +
                  ": empty config key");
    config.set(key, value);
  }
  return config;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "corpus.delimiter") {
    if (value == "tab") schema.delimiter = '\t';
    else if (value == "comma") schema.delimiter = ',';
    else
      throw_usage("config key 'corpus.delimiter' must be 'tab' or 'comma', "
                  "got '" + value + "'");
  } else if (key == "corpus.id_column") {
    if (value.empty()) throw_usage("corpus.id_column cannot be empty");
    schema.id_column = value;
  } else if (key == "corpus.text_column") {
    if (value.empty()) throw_usage("corpus.text_column cannot be empty");
    schema.text_column = value;
  } else if (key == "corpus.label_column") {
    schema.label_column = value;  // empty means "no label column"
  } else if (key == "prep.lexicon") {
    lexicon_path = value;
  } else if (key == "encoder.kind") {
    if (value == "stub") encoder.kind = EncoderKind::deterministic_stub;
    else if (value == "pretrained")
      encoder.kind = EncoderKind::pretrained_multilingual;
    else
      throw_usage("config key 'encoder.kind' must be 'stub' or 'pretrained', "
                  "got '" + value + "'");
  } else if (key == "encoder.model_id") {
    encoder.model_id = value;
  } else if (key == "encoder.weights") {
    encoder.weights_path = value;
  } else if (key == "encoder.vocab") {
    encoder.vocab_path = value;
  } else if (key == "encoder.max_len") {
    encoder.max_len = parse_int(key, value);
    if (encoder.max_len < 2)
      throw_usage("encoder.max_len must be at least 2");
  } else if (key == "encoder.batch_size") {
    encoder.batch_size = parse_int(key, value);
    if (encoder.batch_size <= 0)
      throw_usage("encoder.batch_size must be positive");
  } else if (key == "encoder.stub_dim") {
    encoder.stub_dim = parse_int(key, value);
    if (encoder.stub_dim <= 0) throw_usage("encoder.stub_dim must be positive");
  } else if (key == "head.svm.c") {
    svm.c = parse_double(key, value);
    if (svm.c <= 0.0) throw_usage("head.svm.c must be positive");
  } else if (key == "head.svm.mode") {
    if (value == "svm") svm.objective = LinearObjective::squared_hinge;
    else if (value == "logreg") svm.objective = LinearObjective::logistic;
    else
      throw_usage("config key 'head.svm.mode' must be 'svm' or 'logreg', got "
                  "'" + value + "'");
  } else if (key == "head.svm.folds") {
    svm.folds = parse_int(key, value);
    if (svm.folds < 2) throw_usage("head.svm.folds must be at least 2");
  } else if (key == "head.svm.max_iters") {
    svm.max_iters = parse_int(key, value);
    if (svm.max_iters <= 0) throw_usage("head.svm.max_iters must be positive");
  } else if (key == "head.mlp.widths") {
    mlp.widths = parse_widths(key, value);
    for (int w : mlp.widths)
      if (w <= 0) throw_usage("head.mlp.widths must all be positive");
  } else if (key == "head.mlp.dropout") {
    mlp.dropout = parse_double(key, value);
    if (mlp.dropout < 0.0 || mlp.dropout >= 1.0)
      throw_usage("head.mlp.dropout must lie in [0, 1)");
  } else if (key == "head.mlp.lr") {
    mlp.lr = parse_double(key, value);
    if (mlp.lr <= 0.0) throw_usage("head.mlp.lr must be positive");
  } else if (key == "head.mlp.epochs") {
    mlp.epochs = parse_int(key, value);
    if (mlp.epochs <= 0) throw_usage("head.mlp.epochs must be positive");
  } else if (key == "head.mlp.batch_size") {
    mlp.batch_size = parse_int(key, value);
    if (mlp.batch_size < 2)
      throw_usage("head.mlp.batch_size must be at least 2 (batch norm)");
  } else if (key == "head.finetune.lr") {
    finetune.lr = parse_double(key, value);
    if (finetune.lr <= 0.0) throw_usage("head.finetune.lr must be positive");
  } else if (key == "head.finetune.epochs") {
    finetune.epochs = parse_int(key, value);
    if (finetune.epochs <= 0)
      throw_usage("head.finetune.epochs must be positive");
  } else if (key == "head.finetune.batch_size") {
    finetune.batch_size = parse_int(key, value);
    if (finetune.batch_size <= 0)
      throw_usage("head.finetune.batch_size must be positive");
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else {
    throw_usage("unknown config key '" + key + "'");
  }
}

std::string PipelineConfig::canonical() const {
  std::ostringstream out;
  out << "corpus.delimiter=" << (schema.delimiter == '\t' ? "tab" : "comma")
      << '\n';
  out << "corpus.id_column=" << schema.id_column << '\n';
  out << "corpus.label_column=" << schema.label_column << '\n';
  out << "corpus.text_column=" << schema.text_column << '\n';
  out << "encoder.batch_size=" << encoder.batch_size << '\n';
  out << "encoder.kind="
      << (encoder.kind == EncoderKind::deterministic_stub ? "stub"
                                                          : "pretrained")
      << '\n';
  out << "encoder.max_len=" << encoder.max_len << '\n';
  out << "encoder.model_id=" << encoder.model_id << '\n';
  out << "encoder.stub_dim=" << encoder.stub_dim << '\n';
  out << "encoder.vocab=" << encoder.vocab_path.string() << '\n';
  out << "encoder.weights=" << encoder.weights_path.string() << '\n';
  out << "head.finetune.batch_size=" << finetune.batch_size << '\n';
  out << "head.finetune.epochs=" << finetune.epochs << '\n';
  out << "head.finetune.lr=" << format_double(finetune.lr) << '\n';
  out << "head.mlp.batch_size=" << mlp.batch_size << '\n';
  out << "head.mlp.dropout=" << format_double(mlp.dropout) << '\n';
  out << "head.mlp.epochs=" << mlp.epochs << '\n';
  out << "head.mlp.lr=" << format_double(mlp.lr) << '\n';
  out << "head.mlp.widths=" << format_widths(mlp.widths) << '\n';
  out << "head.svm.c=" << format_double(svm.c) << '\n';
  out << "head.svm.folds=" << svm.folds << '\n';
  out << "head.svm.max_iters=" << svm.max_iters << '\n';
  out << "head.svm.mode="
      << (svm.objective == LinearObjective::squared_hinge ? "svm" : "logreg")
      << '\n';
  out << "prep.lexicon=" << lexicon_path.string() << '\n';
  out << "seed=" << seed << '\n';
  return out.str();
}

std::string PipelineConfig::digest() const {
  const std::string bytes = canonical();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf, 16);
}

std::uint64_t fold_seed(const PipelineConfig& c) { return c.seed + 1; }
std::uint64_t mlp_seed(const PipelineConfig& c) { return c.seed + 2; }
std::uint64_t stub_seed(const PipelineConfig& c) { return c.seed + 3; }
std::uint64_t finetune_seed(const PipelineConfig& c) { return c.seed + 4; }

}  // namespace offmix
