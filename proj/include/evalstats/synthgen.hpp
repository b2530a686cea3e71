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

#ifndef EVALSTATS_SYNTHGEN_HPP_
#define EVALSTATS_SYNTHGEN_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evalstats/records.hpp"

namespace evalstats {

// Distribution the per-question success probabilities are drawn from.
// Beta shapes are restricted to positive integers so sampling can use the
// order-statistics construction (the a-th smallest of a+b-1 uniforms),
// which is bit-portable; continuous shapes would drag libm rounding
// differences into the seeded stream.
struct DifficultyDistribution {
  enum class Kind { kUniform, kBeta, kFixed };
  Kind kind = Kind::kUniform;
  double low = 0.0;   // uniform
  double high = 1.0;  // uniform
  int alpha = 2;      // beta
  int beta = 2;       // beta
  std::vector<double> values;  // fixed: size 1 (broadcast) or n_questions

  static DifficultyDistribution Uniform(double low, double high);
  static DifficultyDistribution Beta(int alpha, int beta);
  static DifficultyDistribution Fixed(std::vector<double> values);
};

// Parses "uniform:LOW,HIGH", "beta:ALPHA,BETA" or "fixed:P[,P...]".
DifficultyDistribution parse_difficulty(std::string_view text);

// Ground-truth parameters for a seeded synthetic score log. Every score is
// a Bernoulli draw: question i succeeds with probability p_i. For pair
// generation, the two models blend a common difficulty stream with weight
// `correlation`, and model B's probabilities are shifted down by
// `true_delta` (so the A - B difference equals true_delta where no
// clamping to [0, 1] occurs).
struct SyntheticSpec {
  int n_questions = 100;
  int n_epochs = 1;
  DifficultyDistribution difficulty;
  double true_delta = 0.0;       // pair generation only
  double correlation = 1.0;      // shared-difficulty weight in [0, 1]
  std::uint64_t seed = 0;
  std::string eval_id = "synthetic";
  std::string model_a = "model-a";
  std::string model_b = "model-b";
};

struct SyntheticPair {
  ScoreMatrix a;
  ScoreMatrix b;
  int clamped_questions = 0;
  // Raised when more than half of model B's shifted probabilities had to
  // be clamped into [0, 1]; the effective difference then no longer equals
  // true_delta.
  bool clamp_warning = false;
};

// Both generators are fully determined by (spec, seed): the draw order is
// fixed (difficulties first, then scores row-major) and every primitive is
// bit-portable, so outputs are byte-identical across platforms.
ScoreMatrix generate_single(const SyntheticSpec& spec);
SyntheticPair generate_pair(const SyntheticSpec& spec);

}  // namespace evalstats

#endif  // EVALSTATS_SYNTHGEN_HPP_
