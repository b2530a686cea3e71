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

#ifndef EVALSTATS_VALIDATION_HPP_
#define EVALSTATS_VALIDATION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace evalstats {

inline constexpr double kDefaultTolerance = 0.05;
inline constexpr double kDefaultBudgetCap = 100.0;
inline constexpr double kDefaultFractionCap = 0.2;

enum class ToleranceMode { kAbsolute, kRelative };

// Deviation of an observed score from a reference score, judged against a
// tolerance. Absolute mode compares |observed - reference| to the tolerance
// directly; relative mode scales the tolerance by |reference|. The boundary
// is inclusive, with a 1e-12 guard so decimal inputs that sit exactly on
// the boundary are not rejected for binary rounding.
struct ToleranceCheck {
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = kDefaultTolerance;
  double deviation = 0.0;  // observed - reference, signed
  ToleranceMode mode = ToleranceMode::kAbsolute;
  bool passed = false;
};

ToleranceCheck check_reference(double observed, double reference,
                               double tolerance = kDefaultTolerance,
                               ToleranceMode mode = ToleranceMode::kAbsolute);

// A reproducible validation subset. n_selected honors three caps at once:
//   n_selected = min(N,
//                    floor(budget_cap / unit_cost)   [N when unit_cost == 0],
//                    ceil(fraction_cap * N))
// Selection is uniform without replacement, driven by SplitMix64(seed) over
// the lexicographically sorted sample ids, so equal inputs and seed yield
// byte-identical plans. selected_ids are reported sorted.
struct SubsetPlan {
  std::size_t total_samples = 0;  // N
  double unit_cost = 0.0;
  double budget_cap = kDefaultBudgetCap;
  double fraction_cap = kDefaultFractionCap;
  std::uint64_t seed = 0;
  std::size_t n_selected = 0;
  std::vector<std::string> selected_ids;
  // Stratified plans only: per-stratum allocation (proportional with
  // largest-remainder rounding) and stratum of each sample.
  std::map<std::string, std::size_t> allocation;
  std::map<std::string, std::string> strata;
  // Set when n_selected < number of strata, in which case covering every
  // stratum is impossible.
  bool coverage_warning = false;
};

SubsetPlan plan_subset(const std::vector<std::string>& sample_ids,
                       double unit_cost, double budget_cap,
                       double fraction_cap, std::uint64_t seed);

// Stratified variant: every sample carries a stratum label. Allocation is
// proportional to stratum sizes with largest-remainder rounding (ties
// broken by stratum name, lexicographically first wins); when
// n_selected >= number of strata every stratum receives at least one
// sample. Within strata the sampling is uniform and seeded, strata
// processed in lexicographic order from one generator stream.
SubsetPlan plan_stratified_subset(
    const std::vector<std::pair<std::string, std::string>>& id_and_stratum,
    double unit_cost, double budget_cap, double fraction_cap,
    std::uint64_t seed);

}  // namespace evalstats

#endif  // EVALSTATS_VALIDATION_HPP_
