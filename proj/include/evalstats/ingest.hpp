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

#ifndef EVALSTATS_INGEST_HPP_
#define EVALSTATS_INGEST_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evalstats/records.hpp"

namespace evalstats {

enum class LogFormat { kJsonl, kCsv };

struct ParseOptions {
  // By default scores must lie in [0, 1]; repository scorers are
  // accuracy-like, and the range check catches percent-vs-fraction
  // mistakes early. Set true to accept any finite score.
  bool free_score_range = false;
};

// Parses a score log. JSONL: one object per line with required keys
// eval_id, model_id, sample_id, epoch, score (extra keys ignored).
// CSV: header row with those five column names in any order.
// Blank lines are skipped; any other malformed line raises ParseError with
// its line number. Duplicate (eval_id, model_id, sample_id, epoch) keys
// raise DataError. Record order is preserved.
RecordSet parse_records(std::istream& input, LogFormat format,
                        const ParseOptions& options = {},
                        std::string_view source = "<stream>");

// Convenience wrapper: opens `path` and infers the format from its
// extension (.csv -> CSV, anything else -> JSONL) unless `format` is given.
RecordSet parse_records_file(const std::string& path,
                             const ParseOptions& options = {});
RecordSet parse_records_file(const std::string& path, LogFormat format,
                             const ParseOptions& options = {});

// Serializes records in the same schema parse_records accepts. Scores are
// written with shortest round-trip formatting, so parse(write(x)) == x.
void write_records(std::ostream& out, const RecordSet& records,
                   LogFormat format);

// Token-usage file: JSONL with keys eval_id, model_id, input_tokens,
// output_tokens (non-negative integers). One row per (eval_id, model_id).
std::vector<TokenUsage> parse_token_usage(std::istream& input,
                                          std::string_view source = "<stream>");

// Assembles the rectangular samples x epochs matrix for one (eval, model).
// sample_ids come out sorted lexicographically; every sample must carry
// exactly the epochs 1..K, where K is the largest epoch present. Samples
// missing epochs raise DataError listing the offending sample_ids; zero
// matching records raise DataError.
ScoreMatrix build_matrix(const RecordSet& records, std::string_view eval_id,
                         std::string_view model_id);

// Distinct (eval_id, model_id) pairs present in a record set, sorted.
std::vector<std::pair<std::string, std::string>> eval_model_pairs(
    const RecordSet& records);

}  // namespace evalstats

#endif  // EVALSTATS_INGEST_HPP_
