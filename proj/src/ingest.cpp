/*
 * Copyright 2025 The evalstats authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "evalstats/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "evalstats/error.hpp"
#include "evalstats/format.hpp"

namespace evalstats {
namespace {

using nlohmann::json;

constexpr const char* kFieldNames[] = {"eval_id", "model_id", "sample_id",
                                       "epoch", "score"};

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

double parse_double_field(const std::string& text, std::string_view source,
                          std::size_t line, std::string_view field) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError(std::string(source), line,
                     "field '" + std::string(field) + "': not a number: '" +
                         text + "'");
  }
  return value;
}

long parse_int_field(const std::string& text, std::string_view source,
                     std::size_t line, std::string_view field) {
  long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError(std::string(source), line,
                     "field '" + std::string(field) +
                         "': not an integer: '" + text + "'");
  }
  return value;
}

void check_record(ScoreRecord& record, const ParseOptions& options,
                  std::string_view source, std::size_t line) {
  if (record.epoch < 1) {
    throw ParseError(std::string(source), line,
                     "field 'epoch': must be >= 1, got " +
                         std::to_string(record.epoch));
  }
  if (!std::isfinite(record.score)) {
    throw ParseError(std::string(source), line,
                     "field 'score': must be finite");
  }
  if (!options.free_score_range &&
      (record.score < 0.0 || record.score > 1.0)) {
    throw ParseError(std::string(source), line,
                     "field 'score': " + format_double_roundtrip(record.score) +
                         " outside [0, 1]; pass --score-range free to accept "
                         "unrestricted scores");
  }
}

ScoreRecord record_from_json(const json& object, std::string_view source,
                             std::size_t line, const ParseOptions& options) {
  if (!object.is_object()) {
    throw ParseError(std::string(source), line, "line is not a JSON object");
  }
  for (const char* field : kFieldNames) {
    if (!object.contains(field)) {
      throw ParseError(std::string(source), line,
                       std::string("missing required field '") + field + "'");
    }
  }
  ScoreRecord record;
  auto string_field = [&](const char* field) {
    const json& v = object.at(field);
    if (!v.is_string()) {
      throw ParseError(std::string(source), line,
                       std::string("field '") + field + "': expected string");
    }
    return v.get<std::string>();
  };
  record.eval_id = string_field("eval_id");
  record.model_id = string_field("model_id");
  record.sample_id = string_field("sample_id");
  const json& epoch = object.at("epoch");
  if (!epoch.is_number_integer()) {
    throw ParseError(std::string(source), line,
                     "field 'epoch': expected integer");
  }
  record.epoch = epoch.get<int>();
  const json& score = object.at("score");
  if (!score.is_number()) {
    throw ParseError(std::string(source), line,
                     "field 'score': expected number");
  }
  record.score = score.get<double>();
  check_record(record, options, source, line);
  return record;
}

// Splits one CSV line into fields. RFC 4180 quoting for commas and
// embedded quotes; fields may not span lines.
std::vector<std::string> split_csv_line(const std::string& line,
                                        std::string_view source,
                                        std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  std::size_t i = 0;
  while (true) {
    current.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            current.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          current.push_back(line[i]);
          ++i;
        }
      }
      if (!closed) {
        throw ParseError(std::string(source), line_no,
                         "unterminated quoted field");
      }
      if (i < line.size() && line[i] != ',') {
        throw ParseError(std::string(source), line_no,
                         "unexpected character after closing quote");
      }
    } else {
      while (i < line.size() && line[i] != ',') {
        if (line[i] == '"') {
          throw ParseError(std::string(source), line_no,
                           "quote inside unquoted field");
        }
        current.push_back(line[i]);
        ++i;
      }
    }
    fields.push_back(current);
    if (i >= line.size()) break;
    ++i;  // skip the comma
  }
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string duplicate_key_message(const ScoreRecord& r) {
  return "duplicate record key (eval_id=" + r.eval_id +
         ", model_id=" + r.model_id + ", sample_id=" + r.sample_id +
         ", epoch=" + std::to_string(r.epoch) + ")";
}

std::string record_key(const ScoreRecord& r) {
  std::string key;
  key.reserve(r.eval_id.size() + r.model_id.size() + r.sample_id.size() + 16);
  key += r.eval_id;
  key += '\x1f';
  key += r.model_id;
  key += '\x1f';
  key += r.sample_id;
  key += '\x1f';
  key += std::to_string(r.epoch);
  return key;
}

RecordSet parse_jsonl(std::istream& input, const ParseOptions& options,
                      std::string_view source) {
  RecordSet set;
  set.source = std::string(source);
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string(source), line_no,
                       std::string("invalid JSON: ") + e.what());
    }
    ScoreRecord record = record_from_json(object, source, line_no, options);
    if (!seen.insert(record_key(record)).second) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": " + duplicate_key_message(record));
    }
    set.records.push_back(std::move(record));
  }
  return set;
}

RecordSet parse_csv(std::istream& input, const ParseOptions& options,
                    std::string_view source) {
  RecordSet set;
  set.source = std::string(source);
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;

  // Header: the five required column names in any order; extras ignored.
  std::map<std::string, std::size_t> columns;
  std::size_t header_width = 0;
  while (std::getline(input, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;
    std::vector<std::string> header = split_csv_line(line, source, line_no);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (!columns.emplace(header[i], i).second) {
        throw ParseError(std::string(source), line_no,
                         "duplicate column '" + header[i] + "'");
      }
    }
    for (const char* field : kFieldNames) {
      if (!columns.count(field)) {
        throw ParseError(std::string(source), line_no,
                         std::string("missing required column '") + field +
                             "'");
      }
    }
    header_width = header.size();
    break;
  }
  if (columns.empty()) return set;  // empty input

  while (std::getline(input, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;
    std::vector<std::string> fields = split_csv_line(line, source, line_no);
    if (fields.size() != header_width) {
      throw ParseError(std::string(source), line_no,
                       "expected " + std::to_string(header_width) +
                           " fields, got " + std::to_string(fields.size()));
    }
    ScoreRecord record;
    record.eval_id = fields[columns.at("eval_id")];
    record.model_id = fields[columns.at("model_id")];
    record.sample_id = fields[columns.at("sample_id")];
    long epoch = parse_int_field(fields[columns.at("epoch")], source, line_no,
                                 "epoch");
    record.epoch = static_cast<int>(epoch);
    record.score =
        parse_double_field(fields[columns.at("score")], source, line_no,
                           "score");
    check_record(record, options, source, line_no);
    if (!seen.insert(record_key(record)).second) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": " + duplicate_key_message(record));
    }
    set.records.push_back(std::move(record));
  }
  return set;
}

}  // namespace

std::vector<double> sample_means(const ScoreMatrix& matrix) {
  std::vector<double> means(matrix.sample_ids.size());
  for (int i = 0; i < matrix.n_samples(); ++i) {
    double sum = 0.0;
    for (int k = 0; k < matrix.epochs; ++k) sum += matrix.at(i, k);
    means[i] = sum / matrix.epochs;
  }
  return means;
}

RecordSet parse_records(std::istream& input, LogFormat format,
                        const ParseOptions& options, std::string_view source) {
  return format == LogFormat::kJsonl ? parse_jsonl(input, options, source)
                                     : parse_csv(input, options, source);
}

RecordSet parse_records_file(const std::string& path,
                             const ParseOptions& options) {
  LogFormat format = path.size() >= 4 && path.ends_with(".csv")
                         ? LogFormat::kCsv
                         : LogFormat::kJsonl;
  return parse_records_file(path, format, options);
}

RecordSet parse_records_file(const std::string& path, LogFormat format,
                             const ParseOptions& options) {
  std::ifstream input(path);
  if (!input) throw UsageError("cannot open file: " + path);
  return parse_records(input, format, options, path);
}

void write_records(std::ostream& out, const RecordSet& records,
                   LogFormat format) {
  if (format == LogFormat::kJsonl) {
    for (const ScoreRecord& r : records.records) {
      out << "{\"eval_id\":" << json(r.eval_id).dump()
          << ",\"model_id\":" << json(r.model_id).dump()
          << ",\"sample_id\":" << json(r.sample_id).dump()
          << ",\"epoch\":" << r.epoch
          << ",\"score\":" << format_double_roundtrip(r.score) << "}\n";
    }
  } else {
    out << "eval_id,model_id,sample_id,epoch,score\n";
    for (const ScoreRecord& r : records.records) {
      out << csv_escape(r.eval_id) << ',' << csv_escape(r.model_id) << ','
          << csv_escape(r.sample_id) << ',' << r.epoch << ','
          << format_double_roundtrip(r.score) << '\n';
    }
  }
}

std::vector<TokenUsage> parse_token_usage(std::istream& input,
                                          std::string_view source) {
  std::vector<TokenUsage> usages;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string(source), line_no,
                       std::string("invalid JSON: ") + e.what());
    }
    if (!object.is_object()) {
      throw ParseError(std::string(source), line_no,
                       "line is not a JSON object");
    }
    TokenUsage usage;
    for (const char* field :
         {"eval_id", "model_id", "input_tokens", "output_tokens"}) {
      if (!object.contains(field)) {
        throw ParseError(std::string(source), line_no,
                         std::string("missing required field '") + field +
                             "'");
      }
    }
    usage.eval_id = object.at("eval_id").get<std::string>();
    usage.model_id = object.at("model_id").get<std::string>();
    for (auto [field, target] :
         {std::pair{"input_tokens", &usage.input_tokens},
          std::pair{"output_tokens", &usage.output_tokens}}) {
      const json& v = object.at(field);
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ParseError(std::string(source), line_no,
                         std::string("field '") + field +
                             "': expected non-negative integer");
      }
      *target = v.get<std::int64_t>();
    }
    if (!seen.emplace(usage.eval_id, usage.model_id).second) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": duplicate usage row for (eval_id=" + usage.eval_id +
                      ", model_id=" + usage.model_id + ")");
    }
    usages.push_back(std::move(usage));
  }
  return usages;
}

ScoreMatrix build_matrix(const RecordSet& records, std::string_view eval_id,
                         std::string_view model_id) {
  // sample -> (epoch -> score); std::map keeps sample ids sorted.
  std::map<std::string, std::map<int, double>> by_sample;
  int max_epoch = 0;
  for (const ScoreRecord& r : records.records) {
    if (r.eval_id != eval_id || r.model_id != model_id) continue;
    by_sample[r.sample_id].emplace(r.epoch, r.score);
    max_epoch = std::max(max_epoch, r.epoch);
  }
  if (by_sample.empty()) {
    throw DataError("no records for (eval_id=" + std::string(eval_id) +
                    ", model_id=" + std::string(model_id) + ") in " +
                    records.source);
  }

  std::vector<std::string> ragged;
  for (const auto& [sample, epochs] : by_sample) {
    bool contiguous = static_cast<int>(epochs.size()) == max_epoch;
    if (contiguous) {
      int expected = 1;
      for (const auto& [epoch, score] : epochs) {
        if (epoch != expected++) {
          contiguous = false;
          break;
        }
      }
    }
    if (!contiguous) ragged.push_back(sample);
  }
  if (!ragged.empty()) {
    std::string message =
        "ragged epochs: every sample must cover epochs 1.." +
        std::to_string(max_epoch) + "; offending sample_ids:";
    for (const std::string& id : ragged) message += " " + id;
    throw DataError(message);
  }

  ScoreMatrix matrix;
  matrix.eval_id = std::string(eval_id);
  matrix.model_id = std::string(model_id);
  matrix.epochs = max_epoch;
  matrix.sample_ids.reserve(by_sample.size());
  matrix.scores.reserve(by_sample.size() * max_epoch);
  for (const auto& [sample, epochs] : by_sample) {
    matrix.sample_ids.push_back(sample);
    for (const auto& [epoch, score] : epochs) matrix.scores.push_back(score);
  }
  return matrix;
}

std::vector<std::pair<std::string, std::string>> eval_model_pairs(
    const RecordSet& records) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const ScoreRecord& r : records.records) {
    pairs.emplace(r.eval_id, r.model_id);
  }
  return {pairs.begin(), pairs.end()};
}

}  // namespace evalstats
