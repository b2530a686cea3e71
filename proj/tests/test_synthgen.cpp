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

#include "evalstats/synthgen.hpp"

#include <string>
#include <vector>

#include "evalstats/comparison.hpp"
#include "evalstats/error.hpp"
#include "evalstats/records.hpp"
#include "evalstats/variance.hpp"
#include "gtest/gtest.h"

namespace evalstats {
namespace {

SyntheticSpec base_spec() {
  SyntheticSpec spec;
  spec.n_questions = 12;
  spec.n_epochs = 3;
  spec.difficulty = DifficultyDistribution::Uniform(0.0, 1.0);
  spec.seed = 1;
  return spec;
}

TEST(GenerateSingle, ShapeIdsAndBinaryScores) {
  const ScoreMatrix matrix = generate_single(base_spec());
  EXPECT_EQ(matrix.eval_id, "synthetic");
  EXPECT_EQ(matrix.model_id, "model-a");
  EXPECT_EQ(matrix.n_samples(), 12);
  EXPECT_EQ(matrix.epochs, 3);
  ASSERT_EQ(matrix.sample_ids.size(), 12u);
  EXPECT_EQ(matrix.sample_ids.front(), "q01");
  EXPECT_EQ(matrix.sample_ids.back(), "q12");
  ASSERT_EQ(matrix.scores.size(), 36u);
  for (double score : matrix.scores) {
    EXPECT_TRUE(score == 0.0 || score == 1.0);
  }
}

TEST(GenerateSingle, SampleIdsZeroPadToQuestionCountWidth) {
  SyntheticSpec spec = base_spec();
  spec.n_questions = 100;
  spec.n_epochs = 1;
  const ScoreMatrix matrix = generate_single(spec);
  EXPECT_EQ(matrix.sample_ids.front(), "q001");
  EXPECT_EQ(matrix.sample_ids[9], "q010");
  EXPECT_EQ(matrix.sample_ids.back(), "q100");
}

TEST(GenerateSingle, SameSeedReproducesByteForByte) {
  const ScoreMatrix first = generate_single(base_spec());
  const ScoreMatrix second = generate_single(base_spec());
  EXPECT_EQ(first.scores, second.scores);
  EXPECT_EQ(first.sample_ids, second.sample_ids);
}

TEST(GenerateSingle, DifferentSeedsDiffer) {
  SyntheticSpec other = base_spec();
  other.seed = 2;
  other.n_questions = 50;
  SyntheticSpec mine = base_spec();
  mine.n_questions = 50;
  EXPECT_NE(generate_single(mine).scores, generate_single(other).scores);
}

TEST(GenerateSingle, DegenerateDifficultiesAreDeterministic) {
  SyntheticSpec spec = base_spec();
  spec.difficulty = DifficultyDistribution::Fixed({1.0});
  for (double score : generate_single(spec).scores) {
    EXPECT_EQ(score, 1.0);
  }
  spec.difficulty = DifficultyDistribution::Fixed({0.0});
  for (double score : generate_single(spec).scores) {
    EXPECT_EQ(score, 0.0);
  }
}

TEST(GenerateSingle, PerQuestionFixedValuesApplyInOrder) {
  SyntheticSpec spec = base_spec();
  spec.n_questions = 2;
  spec.n_epochs = 4;
  spec.difficulty = DifficultyDistribution::Fixed({0.0, 1.0});
  const ScoreMatrix matrix = generate_single(spec);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(matrix.at(0, k), 0.0);
    EXPECT_EQ(matrix.at(1, k), 1.0);
  }
}

TEST(GenerateSingle, CoinFlipQuestionsShowPureEpochNoise) {
  // With every p_i = 0.5 the within-question variance is p(1-p) scaled by
  // the unbiased correction, about 0.25, and there is no real
  // between-question spread.
  SyntheticSpec spec = base_spec();
  spec.n_questions = 600;
  spec.n_epochs = 30;
  spec.difficulty = DifficultyDistribution::Fixed({0.5});
  spec.seed = 3;
  const VarianceComponents components =
      variance_components(generate_single(spec));
  EXPECT_NEAR(components.mean_within, 0.25, 0.015);
  EXPECT_NEAR(components.var_between, 0.0, 0.01);
}

TEST(GenerateSingle, BetaDifficultyShowsDesignedSpread) {
  // Var of Beta(2,2) is 0.05; the decomposition should recover it.
  SyntheticSpec spec = base_spec();
  spec.n_questions = 800;
  spec.n_epochs = 20;
  spec.difficulty = DifficultyDistribution::Beta(2, 2);
  spec.seed = 4;
  const VarianceComponents components =
      variance_components(generate_single(spec));
  EXPECT_NEAR(components.var_between, 0.05, 0.015);
}

TEST(GeneratePair, SameSeedReproducesBothModels) {
  SyntheticSpec spec = base_spec();
  spec.true_delta = 0.1;
  const SyntheticPair first = generate_pair(spec);
  const SyntheticPair second = generate_pair(spec);
  EXPECT_EQ(first.a.scores, second.a.scores);
  EXPECT_EQ(first.b.scores, second.b.scores);
  EXPECT_EQ(first.a.model_id, "model-a");
  EXPECT_EQ(first.b.model_id, "model-b");
}

TEST(GeneratePair, RecoversTheTrueDifference) {
  SyntheticSpec spec = base_spec();
  spec.n_questions = 500;
  spec.n_epochs = 10;
  spec.difficulty = DifficultyDistribution::Fixed({0.7});
  spec.true_delta = 0.3;
  spec.seed = 5;
  const SyntheticPair pair = generate_pair(spec);
  EXPECT_EQ(pair.clamped_questions, 0);
  EXPECT_FALSE(pair.clamp_warning);
  const ComparisonResult result = paired_compare(pair.a, pair.b);
  EXPECT_NEAR(result.delta, 0.3, 0.05);
}

TEST(GeneratePair, ClampWarningWhenShiftLeavesTheUnitInterval) {
  SyntheticSpec spec = base_spec();
  spec.difficulty = DifficultyDistribution::Fixed({0.5});
  spec.true_delta = 0.9;  // raw B probability is -0.4 on every question
  const SyntheticPair pair = generate_pair(spec);
  EXPECT_EQ(pair.clamped_questions, spec.n_questions);
  EXPECT_TRUE(pair.clamp_warning);
}

TEST(GeneratePair, SharedDifficultiesShrinkThePairedError) {
  SyntheticSpec spec = base_spec();
  spec.n_questions = 400;
  spec.n_epochs = 4;
  spec.seed = 6;
  spec.correlation = 1.0;
  const SyntheticPair shared = generate_pair(spec);
  spec.correlation = 0.0;
  const SyntheticPair independent = generate_pair(spec);

  const double se_shared = paired_compare(shared.a, shared.b).std_error;
  const double se_independent =
      paired_compare(independent.a, independent.b).std_error;
  EXPECT_LT(se_shared, se_independent);
}

TEST(GeneratePair, CorrelationOneMeansSameProbabilities) {
  // With full correlation and no shift the two models face identical
  // difficulties, so their aggregate scores differ only by epoch noise.
  SyntheticSpec spec = base_spec();
  spec.n_questions = 400;
  spec.n_epochs = 8;
  spec.correlation = 1.0;
  spec.true_delta = 0.0;
  spec.seed = 7;
  const SyntheticPair pair = generate_pair(spec);
  const ComparisonResult result = paired_compare(pair.a, pair.b);
  EXPECT_NEAR(result.delta, 0.0, 0.03);
}

TEST(ParseDifficulty, AcceptsTheThreeKinds) {
  const DifficultyDistribution uniform = parse_difficulty("uniform:0.2,0.8");
  EXPECT_EQ(uniform.kind, DifficultyDistribution::Kind::kUniform);
  EXPECT_DOUBLE_EQ(uniform.low, 0.2);
  EXPECT_DOUBLE_EQ(uniform.high, 0.8);

  const DifficultyDistribution beta = parse_difficulty("beta:2,3");
  EXPECT_EQ(beta.kind, DifficultyDistribution::Kind::kBeta);
  EXPECT_EQ(beta.alpha, 2);
  EXPECT_EQ(beta.beta, 3);

  const DifficultyDistribution broadcast = parse_difficulty("fixed:0.5");
  EXPECT_EQ(broadcast.kind, DifficultyDistribution::Kind::kFixed);
  ASSERT_EQ(broadcast.values.size(), 1u);
  EXPECT_DOUBLE_EQ(broadcast.values[0], 0.5);

  const DifficultyDistribution listed = parse_difficulty("fixed:0.1,0.9,1");
  ASSERT_EQ(listed.values.size(), 3u);
  EXPECT_DOUBLE_EQ(listed.values[2], 1.0);
}

TEST(ParseDifficulty, RejectsMalformedText) {
  EXPECT_THROW(parse_difficulty("uniform"), UsageError);
  EXPECT_THROW(parse_difficulty("gauss:0,1"), UsageError);
  EXPECT_THROW(parse_difficulty("uniform:0.5"), UsageError);
  EXPECT_THROW(parse_difficulty("beta:2"), UsageError);
  EXPECT_THROW(parse_difficulty("beta:2.5,2"), UsageError);
  EXPECT_THROW(parse_difficulty("fixed:abc"), UsageError);
}

TEST(SpecValidation, RejectsOutOfRangeParameters) {
  SyntheticSpec spec = base_spec();
  spec.n_questions = 0;
  EXPECT_THROW(generate_single(spec), UsageError);

  spec = base_spec();
  spec.n_epochs = 0;
  EXPECT_THROW(generate_single(spec), UsageError);

  spec = base_spec();
  spec.correlation = 1.5;
  EXPECT_THROW(generate_pair(spec), UsageError);

  spec = base_spec();
  spec.true_delta = 1.5;
  EXPECT_THROW(generate_pair(spec), UsageError);

  spec = base_spec();
  spec.difficulty = DifficultyDistribution::Uniform(0.8, 0.2);
  EXPECT_THROW(generate_single(spec), UsageError);

  spec = base_spec();
  spec.difficulty = DifficultyDistribution::Beta(0, 2);
  EXPECT_THROW(generate_single(spec), UsageError);

  spec = base_spec();
  spec.difficulty = DifficultyDistribution::Fixed({1.5});
  EXPECT_THROW(generate_single(spec), UsageError);

  spec = base_spec();
  spec.difficulty = DifficultyDistribution::Fixed({0.5, 0.6});
  EXPECT_THROW(generate_single(spec), UsageError);  // 12 questions, 2 values
}

}  // namespace
}  // namespace evalstats
