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

#include "evalstats/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "evalstats/error.hpp"
#include "evalstats/normal.hpp"

namespace evalstats {

std::vector<LeaderboardEntry> build_leaderboard(
    const std::vector<ModelScore>& scores, double z) {
  if (scores.empty()) throw UsageError("leaderboard needs >= 1 model score");
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw UsageError("z must be a positive finite number");
  }
  std::set<std::string> model_ids;
  for (const ModelScore& s : scores) {
    if (s.eval_id != scores.front().eval_id) {
      throw DataError("leaderboard mixes evaluations: " + s.eval_id +
                      " vs " + scores.front().eval_id);
    }
    if (!s.std_error.has_value()) {
      throw DataError("standard error undefined for model " + s.model_id +
                      "; collect at least 2 questions");
    }
    if (!model_ids.insert(s.model_id).second) {
      throw DataError("duplicate model on leaderboard: " + s.model_id);
    }
  }

  std::vector<LeaderboardEntry> entries;
  entries.reserve(scores.size());
  for (const ModelScore& s : scores) {
    LeaderboardEntry e;
    e.model_id = s.model_id;
    e.score = s.score;
    e.std_error = *s.std_error;
    e.ci_low = s.score - z * e.std_error;
    e.ci_high = s.score + z * e.std_error;
    entries.push_back(e);
  }
  std::sort(entries.begin(), entries.end(),
            [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.model_id < b.model_id;
            });

  // Chain consecutive entries whose intervals overlap into one tie group.
  int group = 1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = static_cast<int>(i) + 1;
    if (i > 0) {
      const bool overlaps = entries[i].ci_high >= entries[i - 1].ci_low &&
                            entries[i - 1].ci_high >= entries[i].ci_low;
      if (!overlaps) ++group;
    }
    entries[i].tie_group = group;
  }
  return entries;
}

PairwiseGrid pairwise_grid(const std::vector<ScoreMatrix>& matrices,
                           CompareMode mode, double z, Correction correction) {
  if (matrices.size() < 2) {
    throw UsageError("pairwise grid needs >= 2 models, got " +
                     std::to_string(matrices.size()));
  }
  std::vector<const ScoreMatrix*> ordered;
  ordered.reserve(matrices.size());
  for (const ScoreMatrix& m : matrices) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(),
            [](const ScoreMatrix* a, const ScoreMatrix* b) {
              return a->model_id < b->model_id;
            });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->model_id == ordered[i - 1]->model_id) {
      throw DataError("duplicate model in grid: " + ordered[i]->model_id);
    }
    if (ordered[i]->eval_id != ordered[0]->eval_id) {
      throw DataError("grid mixes evaluations: " + ordered[i]->eval_id +
                      " vs " + ordered[0]->eval_id);
    }
  }

  const int m = static_cast<int>(ordered.size());
  PairwiseGrid grid;
  grid.correction = correction;
  grid.z_effective = z;
  if (correction == Correction::kBonferroni) {
    const double pairs = m * (m - 1) / 2.0;
    // Two-sided interval at family level 1 - 0.05/pairs; never narrower
    // than the requested z.
    grid.z_effective =
        std::max(z, normal_quantile(1.0 - 0.05 / (2.0 * pairs)));
  }
  grid.model_ids.reserve(ordered.size());
  for (const ScoreMatrix* mat : ordered) grid.model_ids.push_back(mat->model_id);
  grid.results.resize(static_cast<std::size_t>(m) * m);

  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      ComparisonResult forward;
      try {
        forward = mode == CompareMode::kPaired
                      ? paired_compare(*ordered[i], *ordered[j],
                                       grid.z_effective)
                      : unpaired_compare(model_score(*ordered[i]),
                                         model_score(*ordered[j]),
                                         grid.z_effective);
      } catch (const Error& e) {
        throw DataError("pair (" + ordered[i]->model_id + ", " +
                        ordered[j]->model_id + "): " + e.what());
      }
      // Mirror image: negating every difference is exact in IEEE
      // arithmetic, so the grid is antisymmetric by construction.
      ComparisonResult backward = forward;
      backward.model_a = forward.model_b;
      backward.model_b = forward.model_a;
      backward.delta = -forward.delta;
      backward.ci_low = -forward.ci_high;
      backward.ci_high = -forward.ci_low;
      backward.excluded_a = forward.excluded_b;
      backward.excluded_b = forward.excluded_a;
      grid.results[static_cast<std::size_t>(i) * m + j] = std::move(forward);
      grid.results[static_cast<std::size_t>(j) * m + i] = std::move(backward);
    }
  }
  return grid;
}

}  // namespace evalstats
