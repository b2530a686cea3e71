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

#ifndef EVALSTATS_LEADERBOARD_HPP_
#define EVALSTATS_LEADERBOARD_HPP_

#include <optional>
#include <string>
#include <vector>

#include "evalstats/comparison.hpp"
#include "evalstats/records.hpp"

namespace evalstats {

// One leaderboard row. Entries are sorted by score descending (ties broken
// by model_id); tie_group chains consecutive entries whose confidence
// intervals overlap, flagging ranks the data cannot actually distinguish.
// The grouping is a presentation heuristic, not a joint statistical test.
struct LeaderboardEntry {
  int rank = 0;
  std::string model_id;
  double score = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int tie_group = 0;
};

enum class Correction { kNone, kBonferroni };

// All-pairs comparison matrix for M models. results is M x M row-major with
// an empty diagonal; results[i][j] compares model i (as A) to model j, so
// deltas are antisymmetric. Under Bonferroni the working z becomes
// max(z, Phi^-1(1 - 0.05 / (2 * M(M-1)/2))): each interval is widened to a
// simultaneous 95% family level, never narrowed below the requested z.
struct PairwiseGrid {
  std::vector<std::string> model_ids;
  std::vector<std::optional<ComparisonResult>> results;  // M*M
  Correction correction = Correction::kNone;
  double z_effective = kDefaultZ;

  const std::optional<ComparisonResult>& at(int i, int j) const {
    return results[static_cast<std::size_t>(i) * model_ids.size() + j];
  }
};

// Requires all scores on one eval_id with defined standard errors.
std::vector<LeaderboardEntry> build_leaderboard(
    const std::vector<ModelScore>& scores, double z = kDefaultZ);

// Requires >= 2 matrices, one per model, all on one eval_id. Models are
// ordered lexicographically in the grid.
PairwiseGrid pairwise_grid(const std::vector<ScoreMatrix>& matrices,
                           CompareMode mode, double z = kDefaultZ,
                           Correction correction = Correction::kNone);

}  // namespace evalstats

#endif  // EVALSTATS_LEADERBOARD_HPP_
