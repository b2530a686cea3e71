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

#ifndef EVALSTATS_COMPARISON_HPP_
#define EVALSTATS_COMPARISON_HPP_

#include <optional>
#include <string>

#include "evalstats/records.hpp"

namespace evalstats {

inline constexpr double kDefaultZ = 1.96;

// A model's aggregate score on one evaluation: epochs are collapsed to
// per-question means first, then S is the mean of those means and SE the
// unbiased standard deviation of the means divided by sqrt(N). With a
// single question the score is still defined but the standard error is not;
// std_error is empty rather than silently zero.
struct ModelScore {
  std::string model_id;
  std::string eval_id;
  int n_questions = 0;  // N
  double score = 0.0;   // S
  std::optional<double> std_error;  // SE
};

enum class CompareMode { kPaired, kUnpaired };

// Two-model difference with normal-approximation confidence interval.
// Unpaired: delta = S_A - S_B, std_error = sqrt(SE_A^2 + SE_B^2).
// Paired:   delta = mean of per-question differences d_i, sd_d their
//           unbiased standard deviation, std_error = sd_d / sqrt(N).
// In both modes the interval is exactly delta -+ z * std_error and
// `significant` is exactly (ci_low > 0 || ci_high < 0).
struct ComparisonResult {
  CompareMode mode = CompareMode::kUnpaired;
  std::string eval_id;
  std::string model_a;
  std::string model_b;
  double delta = 0.0;
  double std_error = 0.0;
  std::optional<double> sd_d;  // paired only
  double ci_low = 0.0;
  double ci_high = 0.0;
  double z = kDefaultZ;
  int n = 0;  // questions used
  bool significant = false;
  // Paired only: questions present on one side but not the other.
  int excluded_a = 0;
  int excluded_b = 0;
};

ModelScore model_score(const ScoreMatrix& matrix);

// Requires matching eval_ids and defined standard errors on both sides.
ComparisonResult unpaired_compare(const ModelScore& a, const ModelScore& b,
                                  double z = kDefaultZ);

// Compares on the intersection of sample_ids, which must have >= 2
// elements; how many questions each side had that were excluded is
// recorded in the result.
ComparisonResult paired_compare(const ScoreMatrix& a, const ScoreMatrix& b,
                                double z = kDefaultZ);

}  // namespace evalstats

#endif  // EVALSTATS_COMPARISON_HPP_
