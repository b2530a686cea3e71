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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "evalstats/error.hpp"
#include "evalstats/format.hpp"
#include "evalstats/rng.hpp"

namespace evalstats {
namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw UsageError("invalid " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const std::size_t comma = text.find(',');
    if (comma == std::string_view::npos) {
      parts.push_back(text);
      return parts;
    }
    parts.push_back(text.substr(0, comma));
    text.remove_prefix(comma + 1);
  }
}

void validate_spec(const SyntheticSpec& spec) {
  if (spec.n_questions < 1) {
    throw UsageError("n_questions must be >= 1, got " +
                     std::to_string(spec.n_questions));
  }
  if (spec.n_epochs < 1) {
    throw UsageError("n_epochs must be >= 1, got " +
                     std::to_string(spec.n_epochs));
  }
  if (!(spec.correlation >= 0.0 && spec.correlation <= 1.0)) {
    throw UsageError("correlation must lie in [0, 1], got " +
                     format_double_roundtrip(spec.correlation));
  }
  if (!(spec.true_delta >= -1.0 && spec.true_delta <= 1.0)) {
    throw UsageError("true_delta must lie in [-1, 1], got " +
                     format_double_roundtrip(spec.true_delta));
  }

  const DifficultyDistribution& d = spec.difficulty;
  switch (d.kind) {
    case DifficultyDistribution::Kind::kUniform:
      if (!(d.low >= 0.0 && d.low <= d.high && d.high <= 1.0)) {
        throw UsageError("uniform difficulty needs 0 <= low <= high <= 1");
      }
      break;
    case DifficultyDistribution::Kind::kBeta:
      if (d.alpha < 1 || d.beta < 1) {
        throw UsageError("beta difficulty needs integer shapes >= 1");
      }
      break;
    case DifficultyDistribution::Kind::kFixed:
      if (d.values.empty() ||
          (d.values.size() != 1 &&
           d.values.size() != static_cast<std::size_t>(spec.n_questions))) {
        throw UsageError(
            "fixed difficulty needs 1 value or one per question, got " +
            std::to_string(d.values.size()));
      }
      for (double p : d.values) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw UsageError("fixed difficulty values must lie in [0, 1]");
        }
      }
      break;
  }
}

// Beta(a, b) with integer shapes via order statistics: the a-th smallest
// of a + b - 1 independent uniforms. nth_element only moves the drawn
// doubles around, so the result is bit-identical everywhere.
double draw_beta(SplitMix64& rng, int alpha, int beta) {
  std::vector<double> draws(static_cast<std::size_t>(alpha + beta - 1));
  for (double& u : draws) u = rng.next_double();
  auto nth = draws.begin() + (alpha - 1);
  std::nth_element(draws.begin(), nth, draws.end());
  return *nth;
}

double draw_difficulty(SplitMix64& rng, const DifficultyDistribution& d) {
  switch (d.kind) {
    case DifficultyDistribution::Kind::kUniform:
      return d.low + (d.high - d.low) * rng.next_double();
    case DifficultyDistribution::Kind::kBeta:
      return draw_beta(rng, d.alpha, d.beta);
    case DifficultyDistribution::Kind::kFixed:
      break;  // handled by the caller; consumes no draws
  }
  throw Error("fixed difficulty has no random draw");
}

std::vector<std::string> make_sample_ids(int n_questions) {
  const std::size_t width = std::to_string(n_questions).size();
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n_questions));
  for (int i = 1; i <= n_questions; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back("q" + std::string(width - digits.size(), '0') + digits);
  }
  return ids;
}

ScoreMatrix empty_matrix(const SyntheticSpec& spec,
                         const std::string& model_id) {
  ScoreMatrix matrix;
  matrix.eval_id = spec.eval_id;
  matrix.model_id = model_id;
  matrix.sample_ids = make_sample_ids(spec.n_questions);
  matrix.epochs = spec.n_epochs;
  matrix.scores.assign(
      static_cast<std::size_t>(spec.n_questions) * spec.n_epochs, 0.0);
  return matrix;
}

double fixed_value(const DifficultyDistribution& d, int question) {
  return d.values.size() == 1 ? d.values[0]
                              : d.values[static_cast<std::size_t>(question)];
}

}  // namespace

DifficultyDistribution DifficultyDistribution::Uniform(double low,
                                                       double high) {
  DifficultyDistribution d;
  d.kind = Kind::kUniform;
  d.low = low;
  d.high = high;
  return d;
}

DifficultyDistribution DifficultyDistribution::Beta(int alpha, int beta) {
  DifficultyDistribution d;
  d.kind = Kind::kBeta;
  d.alpha = alpha;
  d.beta = beta;
  return d;
}

DifficultyDistribution DifficultyDistribution::Fixed(
    std::vector<double> values) {
  DifficultyDistribution d;
  d.kind = Kind::kFixed;
  d.values = std::move(values);
  return d;
}

DifficultyDistribution parse_difficulty(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError("difficulty must look like KIND:ARGS, got '" +
                     std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::vector<std::string_view> args =
      split_commas(text.substr(colon + 1));

  if (kind == "uniform") {
    if (args.size() != 2) {
      throw UsageError("uniform difficulty needs LOW,HIGH");
    }
    return DifficultyDistribution::Uniform(parse_number(args[0], "low"),
                                           parse_number(args[1], "high"));
  }
  if (kind == "beta") {
    if (args.size() != 2) {
      throw UsageError("beta difficulty needs ALPHA,BETA");
    }
    const double alpha = parse_number(args[0], "alpha");
    const double beta = parse_number(args[1], "beta");
    if (alpha != std::floor(alpha) || beta != std::floor(beta)) {
      throw UsageError("beta difficulty shapes must be integers");
    }
    return DifficultyDistribution::Beta(static_cast<int>(alpha),
                                        static_cast<int>(beta));
  }
  if (kind == "fixed") {
    std::vector<double> values;
    values.reserve(args.size());
    for (std::string_view arg : args) {
      values.push_back(parse_number(arg, "probability"));
    }
    return DifficultyDistribution::Fixed(std::move(values));
  }
  throw UsageError("unknown difficulty kind '" + std::string(kind) +
                   "' (expected uniform, beta or fixed)");
}

ScoreMatrix generate_single(const SyntheticSpec& spec) {
  validate_spec(spec);

  const bool fixed =
      spec.difficulty.kind == DifficultyDistribution::Kind::kFixed;
  SplitMix64 rng(spec.seed);

  std::vector<double> probabilities(
      static_cast<std::size_t>(spec.n_questions));
  for (int i = 0; i < spec.n_questions; ++i) {
    probabilities[static_cast<std::size_t>(i)] =
        fixed ? fixed_value(spec.difficulty, i)
              : draw_difficulty(rng, spec.difficulty);
  }

  ScoreMatrix matrix = empty_matrix(spec, spec.model_a);
  for (int i = 0; i < spec.n_questions; ++i) {
    for (int k = 0; k < spec.n_epochs; ++k) {
      matrix.at(static_cast<std::size_t>(i), k) =
          rng.next_double() < probabilities[static_cast<std::size_t>(i)]
              ? 1.0
              : 0.0;
    }
  }
  return matrix;
}

SyntheticPair generate_pair(const SyntheticSpec& spec) {
  validate_spec(spec);

  const bool fixed =
      spec.difficulty.kind == DifficultyDistribution::Kind::kFixed;
  SplitMix64 rng(spec.seed);

  // Phase 1, difficulties. Per question the stream yields three draws in
  // order (shared, own-A, own-B); each model blends shared and own with
  // weight `correlation`, then B is shifted down by true_delta.
  const std::size_t n = static_cast<std::size_t>(spec.n_questions);
  std::vector<double> p_a(n);
  std::vector<double> p_b(n);
  SyntheticPair pair;
  for (std::size_t i = 0; i < n; ++i) {
    double shared, own_a, own_b;
    if (fixed) {
      shared = own_a = own_b = fixed_value(spec.difficulty,
                                           static_cast<int>(i));
    } else {
      shared = draw_difficulty(rng, spec.difficulty);
      own_a = draw_difficulty(rng, spec.difficulty);
      own_b = draw_difficulty(rng, spec.difficulty);
    }
    p_a[i] = spec.correlation * shared + (1.0 - spec.correlation) * own_a;
    const double raw_b =
        spec.correlation * shared + (1.0 - spec.correlation) * own_b -
        spec.true_delta;
    p_b[i] = std::clamp(raw_b, 0.0, 1.0);
    if (p_b[i] != raw_b) ++pair.clamped_questions;
  }
  pair.clamp_warning = 2 * pair.clamped_questions > spec.n_questions;

  // Phase 2, scores. Row-major over (question, epoch); within a cell the
  // A draw precedes the B draw. Epoch noise is always independent across
  // models; only difficulties are correlated.
  pair.a = empty_matrix(spec, spec.model_a);
  pair.b = empty_matrix(spec, spec.model_b);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < spec.n_epochs; ++k) {
      pair.a.at(i, k) = rng.next_double() < p_a[i] ? 1.0 : 0.0;
      pair.b.at(i, k) = rng.next_double() < p_b[i] ? 1.0 : 0.0;
    }
  }
  return pair;
}

}  // namespace evalstats
