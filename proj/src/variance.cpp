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

#include "evalstats/variance.hpp"

#include <algorithm>
#include <cmath>

#include "evalstats/error.hpp"

namespace evalstats {
namespace {

// Unbiased variance, two-pass with a fixed left-to-right summation order so
// results are bit-stable across runs.
double unbiased_variance(const std::vector<double>& values, double mean) {
  double sum_sq = 0.0;
  for (double v : values) {
    const double d = v - mean;
    sum_sq += d * d;
  }
  return sum_sq / (values.size() - 1);
}

}  // namespace

std::vector<PerSampleStats> per_sample_stats(const ScoreMatrix& matrix) {
  if (matrix.epochs < 2) {
    throw DataError("per-sample variance needs >= 2 epochs, matrix has " +
                    std::to_string(matrix.epochs));
  }
  std::vector<PerSampleStats> stats;
  stats.reserve(matrix.sample_ids.size());
  for (int i = 0; i < matrix.n_samples(); ++i) {
    double sum = 0.0;
    for (int k = 0; k < matrix.epochs; ++k) sum += matrix.at(i, k);
    const double mean = sum / matrix.epochs;
    double sum_sq = 0.0;
    for (int k = 0; k < matrix.epochs; ++k) {
      const double d = matrix.at(i, k) - mean;
      sum_sq += d * d;
    }
    stats.push_back({matrix.sample_ids[i], mean, sum_sq / (matrix.epochs - 1)});
  }
  return stats;
}

VarianceComponents variance_components(const ScoreMatrix& matrix) {
  if (matrix.n_samples() < 2) {
    throw DataError("variance decomposition needs >= 2 samples, matrix has " +
                    std::to_string(matrix.n_samples()));
  }
  const std::vector<PerSampleStats> stats = per_sample_stats(matrix);

  VarianceComponents components;
  components.n_samples = matrix.n_samples();
  components.n_epochs = matrix.epochs;

  double sum_var = 0.0;
  std::vector<double> means;
  means.reserve(stats.size());
  for (const PerSampleStats& s : stats) {
    sum_var += s.var_within;
    means.push_back(s.mean);
  }
  components.mean_within = sum_var / components.n_samples;

  double sum_means = 0.0;
  for (double m : means) sum_means += m;
  components.var_of_means =
      unbiased_variance(means, sum_means / components.n_samples);

  // Var(x-bar) measured at K epochs still contains epoch noise of
  // mean_within/K; subtract it so the noise term cannot appear on both
  // sides of the epoch inequality. The estimator can go negative, in which
  // case it is clamped and flagged.
  const double debiased =
      components.var_of_means - components.mean_within / components.n_epochs;
  components.clamped = debiased < 0.0;
  components.var_between = components.clamped ? 0.0 : debiased;
  return components;
}

EpochRecommendation optimal_epochs(const VarianceComponents& components,
                                   double c, int k_max) {
  if (!(c > 0.0 && c < 1.0)) {
    throw UsageError("ratio threshold c must lie in (0, 1), got " +
                     std::to_string(c));
  }
  if (k_max < 1) {
    throw UsageError("k_max must be >= 1, got " + std::to_string(k_max));
  }

  EpochRecommendation rec;
  rec.ratio_threshold = c;

  const double mean_within = components.mean_within;
  const double target = c * components.var_between;
  const auto satisfied = [&](long k) {
    return mean_within / static_cast<double>(k) <= target;
  };

  if (satisfied(1)) {  // covers mean_within == 0
    rec.k_star = 1;
    rec.satisfied_value = mean_within;
    return rec;
  }
  if (!(target > 0.0)) {
    return rec;  // no K can satisfy the inequality
  }

  // Closed form ceil(mean_within / (c * var_between)), then nudged so the
  // result is the exact minimum of the predicate as evaluated in double
  // precision; the predicate is monotone in K, so agreement with a linear
  // scan is guaranteed.
  const double bound = mean_within / target;
  long k;
  if (!std::isfinite(bound) || bound > static_cast<double>(k_max) + 2.0) {
    k = static_cast<long>(k_max) + 1;
    if (satisfied(k_max)) k = k_max;
  } else {
    k = std::max(1L, static_cast<long>(std::ceil(bound)));
    while (k > 1 && satisfied(k - 1)) --k;
    while (k <= k_max && !satisfied(k)) ++k;
  }
  while (k > 1 && satisfied(k - 1)) --k;

  if (k > k_max) return rec;  // minimum exceeds the cap
  rec.k_star = static_cast<int>(k);
  rec.satisfied_value = mean_within / static_cast<double>(k);
  return rec;
}

}  // namespace evalstats
