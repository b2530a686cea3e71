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

#ifndef EVALSTATS_RECORDS_HPP_
#define EVALSTATS_RECORDS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace evalstats {

// One score observation: model `model_id` ran sample `sample_id` of
// evaluation `eval_id` at resampling epoch `epoch` and obtained `score`.
struct ScoreRecord {
  std::string eval_id;
  std::string model_id;
  std::string sample_id;
  int epoch = 1;  // 1-based
  double score = 0.0;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

// An ordered batch of records, as parsed from one input. The
// (eval_id, model_id, sample_id, epoch) key is unique within a set.
struct RecordSet {
  std::vector<ScoreRecord> records;
  std::string source;  // where the records came from: file path or stream name

  friend bool operator==(const RecordSet& a, const RecordSet& b) {
    return a.records == b.records;
  }
};

// Aggregate token counts for one model on one evaluation.
struct TokenUsage {
  std::string eval_id;
  std::string model_id;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

// Rectangular samples x epochs score grid for one (eval_id, model_id).
// Row i holds the K epoch scores of sample_ids[i]; sample_ids are sorted
// lexicographically and epochs span the contiguous range 1..K.
struct ScoreMatrix {
  std::string eval_id;
  std::string model_id;
  std::vector<std::string> sample_ids;
  int epochs = 0;              // K
  std::vector<double> scores;  // row-major, sample_ids.size() * epochs

  int n_samples() const { return static_cast<int>(sample_ids.size()); }

  double at(int sample, int epoch_index) const {
    return scores[static_cast<std::size_t>(sample) * epochs + epoch_index];
  }
  double& at(int sample, int epoch_index) {
    return scores[static_cast<std::size_t>(sample) * epochs + epoch_index];
  }
};

// Mean score per sample, epochs collapsed. Order matches sample_ids.
std::vector<double> sample_means(const ScoreMatrix& matrix);

}  // namespace evalstats

#endif  // EVALSTATS_RECORDS_HPP_
