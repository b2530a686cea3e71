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

#include "evalstats/comparison.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "evalstats/error.hpp"

namespace evalstats {
namespace {

void require_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw UsageError("z must be a positive finite number, got " +
                     std::to_string(z));
  }
}

void finish_interval(ComparisonResult& result) {
  result.ci_low = result.delta - result.z * result.std_error;
  result.ci_high = result.delta + result.z * result.std_error;
  result.significant = result.ci_low > 0.0 || result.ci_high < 0.0;
}

}  // namespace

ModelScore model_score(const ScoreMatrix& matrix) {
  const std::vector<double> means = sample_means(matrix);
  ModelScore score;
  score.model_id = matrix.model_id;
  score.eval_id = matrix.eval_id;
  score.n_questions = matrix.n_samples();

  double sum = 0.0;
  for (double m : means) sum += m;
  score.score = sum / means.size();

  if (score.n_questions >= 2) {
    double sum_sq = 0.0;
    for (double m : means) {
      const double d = m - score.score;
      sum_sq += d * d;
    }
    score.std_error =
        std::sqrt(sum_sq / (means.size() - 1)) / std::sqrt(means.size());
  }
  return score;
}

ComparisonResult unpaired_compare(const ModelScore& a, const ModelScore& b,
                                  double z) {
  require_z(z);
  if (a.eval_id != b.eval_id) {
    throw DataError("cannot compare scores from different evaluations: " +
                    a.eval_id + " vs " + b.eval_id);
  }
  for (const ModelScore* s : {&a, &b}) {
    if (!s->std_error.has_value()) {
      throw DataError("standard error undefined for model " + s->model_id +
                      " (N = " + std::to_string(s->n_questions) +
                      "); collect at least 2 questions");
    }
  }

  ComparisonResult result;
  result.mode = CompareMode::kUnpaired;
  result.eval_id = a.eval_id;
  result.model_a = a.model_id;
  result.model_b = b.model_id;
  result.z = z;
  result.delta = a.score - b.score;
  result.std_error = std::sqrt(*a.std_error * *a.std_error +
                               *b.std_error * *b.std_error);
  result.n = a.n_questions + b.n_questions;
  finish_interval(result);
  return result;
}

ComparisonResult paired_compare(const ScoreMatrix& a, const ScoreMatrix& b,
                                double z) {
  require_z(z);
  if (a.eval_id != b.eval_id) {
    throw DataError("cannot compare matrices from different evaluations: " +
                    a.eval_id + " vs " + b.eval_id);
  }

  const std::vector<double> means_a = sample_means(a);
  const std::vector<double> means_b = sample_means(b);
  std::unordered_map<std::string_view, std::size_t> index_b;
  index_b.reserve(b.sample_ids.size());
  for (std::size_t i = 0; i < b.sample_ids.size(); ++i) {
    index_b.emplace(b.sample_ids[i], i);
  }

  // Per-question differences on the sample_id intersection, in a's
  // (sorted) order.
  std::vector<double> diffs;
  diffs.reserve(means_a.size());
  for (std::size_t i = 0; i < a.sample_ids.size(); ++i) {
    auto it = index_b.find(a.sample_ids[i]);
    if (it == index_b.end()) continue;
    diffs.push_back(means_a[i] - means_b[it->second]);
  }
  const int n = static_cast<int>(diffs.size());
  if (n < 2) {
    throw DataError(
        "paired comparison needs >= 2 overlapping questions; model " +
        a.model_id + " has " + std::to_string(a.n_samples()) + ", model " +
        b.model_id + " has " + std::to_string(b.n_samples()) +
        ", overlap is " + std::to_string(n));
  }

  double sum = 0.0;
  for (double d : diffs) sum += d;
  const double mean_diff = sum / n;
  double sum_sq = 0.0;
  for (double d : diffs) {
    const double dd = d - mean_diff;
    sum_sq += dd * dd;
  }
  const double sd_d = std::sqrt(sum_sq / (n - 1));

  ComparisonResult result;
  result.mode = CompareMode::kPaired;
  result.eval_id = a.eval_id;
  result.model_a = a.model_id;
  result.model_b = b.model_id;
  result.z = z;
  result.delta = mean_diff;
  result.sd_d = sd_d;
  result.std_error = sd_d / std::sqrt(static_cast<double>(n));
  result.n = n;
  result.excluded_a = a.n_samples() - n;
  result.excluded_b = b.n_samples() - n;
  finish_interval(result);
  return result;
}

}  // namespace evalstats
