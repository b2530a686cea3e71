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

#ifndef EVALSTATS_VARIANCE_HPP_
#define EVALSTATS_VARIANCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "evalstats/records.hpp"

namespace evalstats {

// Default threshold c for the epoch recommendation: stop adding epochs
// once model noise contributes at most a tenth of the question-difficulty
// variance.
inline constexpr double kDefaultRatioThreshold = 0.1;

// Per-sample epoch statistics: mean score and unbiased (K-1 denominator)
// variance of one sample's scores across epochs.
struct PerSampleStats {
  std::string sample_id;
  double mean = 0.0;
  double var_within = 0.0;
};

// Decomposition of score variability for one matrix.
//
// mean_within  averages the per-sample epoch variances: the model-noise
//              component.
// var_of_means is the unbiased variance across per-sample mean scores; it
//              mixes question-difficulty spread with residual epoch noise.
// var_between  removes that residue: max(0, var_of_means - mean_within/K).
struct VarianceComponents {
  int n_samples = 0;   // N
  int n_epochs = 0;    // K as measured
  double mean_within = 0.0;
  double var_of_means = 0.0;
  double var_between = 0.0;
  bool clamped = false;  // true when var_of_means - mean_within/K was < 0
};

// Minimal epoch count K with mean_within/K <= ratio_threshold * var_between.
// k_star is empty when no K satisfies the inequality (var_between == 0 with
// epoch noise present) or when the minimal K exceeds the requested cap.
struct EpochRecommendation {
  std::optional<int> k_star;
  double ratio_threshold = 0.0;              // c
  std::optional<double> satisfied_value;     // mean_within / k_star
};

// Requires K >= 2. One entry per sample, in sample_ids order.
std::vector<PerSampleStats> per_sample_stats(const ScoreMatrix& matrix);

// Requires N >= 2 and K >= 2.
VarianceComponents variance_components(const ScoreMatrix& matrix);

// Requires 0 < c < 1 and k_max >= 1. The result is defined as the minimal
// integer satisfying the inequality exactly as a linear scan over
// K = 1..k_max would evaluate it in double precision.
EpochRecommendation optimal_epochs(const VarianceComponents& components,
                                   double c, int k_max);

}  // namespace evalstats

#endif  // EVALSTATS_VARIANCE_HPP_
