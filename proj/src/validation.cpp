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

#include "evalstats/validation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "evalstats/error.hpp"
#include "evalstats/format.hpp"
#include "evalstats/rng.hpp"

namespace evalstats {
namespace {

// Tolerance comparisons carry this guard so decimal inputs that land
// exactly on the boundary (0.85 vs 0.80 at tolerance 0.05) pass despite
// binary rounding of the inputs. Any real excess fails: the guard is far
// below meaningful score resolution.
constexpr double kBoundaryGuard = 1e-12;

std::size_t capped_selection_size(std::size_t total, double unit_cost,
                                  double budget_cap, double fraction_cap) {
  if (!(budget_cap > 0.0)) {
    throw UsageError("budget cap must be > 0, got " +
                     format_double_roundtrip(budget_cap));
  }
  if (!(fraction_cap > 0.0 && fraction_cap <= 1.0)) {
    throw UsageError("fraction cap must lie in (0, 1], got " +
                     format_double_roundtrip(fraction_cap));
  }
  if (unit_cost < 0.0 || !std::isfinite(unit_cost)) {
    throw UsageError("unit cost must be >= 0, got " +
                     format_double_roundtrip(unit_cost));
  }

  std::size_t by_budget = total;
  if (unit_cost > 0.0) {
    const double affordable = std::floor(budget_cap / unit_cost);
    by_budget = affordable >= static_cast<double>(total)
                    ? total
                    : static_cast<std::size_t>(affordable);
  }
  const double fraction = std::ceil(fraction_cap * static_cast<double>(total));
  const std::size_t by_fraction =
      std::min(static_cast<std::size_t>(fraction), total);

  const std::size_t n = std::min({total, by_budget, by_fraction});
  if (n == 0) {
    throw DataError(
        "budget " + format_double_roundtrip(budget_cap) +
        " cannot cover a single sample; minimum feasible budget is " +
        format_double_roundtrip(unit_cost));
  }
  return n;
}

// Partial Fisher-Yates: after the loop the first n slots hold a uniform
// without-replacement draw. ids must be sorted (determinism contract).
std::vector<std::string> draw_without_replacement(std::vector<std::string> ids,
                                                  std::size_t n,
                                                  SplitMix64& rng) {
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = j + rng.next_below(ids.size() - j);
    std::swap(ids[j], ids[i]);
  }
  ids.resize(n);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> sorted_unique_ids(std::vector<std::string> ids) {
  if (ids.empty()) throw UsageError("sample_ids must be non-empty");
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw DataError("duplicate sample_id: " + *dup);
  }
  return ids;
}

}  // namespace

ToleranceCheck check_reference(double observed, double reference,
                               double tolerance, ToleranceMode mode) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw UsageError("tolerance must be > 0, got " +
                     format_double_roundtrip(tolerance));
  }
  if (!std::isfinite(observed) || !std::isfinite(reference)) {
    throw UsageError("observed and reference scores must be finite");
  }
  if (mode == ToleranceMode::kRelative && reference == 0.0) {
    throw UsageError(
        "relative tolerance is undefined for reference 0; use absolute mode");
  }

  ToleranceCheck check;
  check.observed = observed;
  check.reference = reference;
  check.tolerance = tolerance;
  check.mode = mode;
  check.deviation = observed - reference;
  const double allowed = mode == ToleranceMode::kAbsolute
                             ? tolerance
                             : tolerance * std::abs(reference);
  check.passed = std::abs(check.deviation) <= allowed + kBoundaryGuard;
  return check;
}

SubsetPlan plan_subset(const std::vector<std::string>& sample_ids,
                       double unit_cost, double budget_cap,
                       double fraction_cap, std::uint64_t seed) {
  std::vector<std::string> ids = sorted_unique_ids(sample_ids);

  SubsetPlan plan;
  plan.total_samples = ids.size();
  plan.unit_cost = unit_cost;
  plan.budget_cap = budget_cap;
  plan.fraction_cap = fraction_cap;
  plan.seed = seed;
  plan.n_selected =
      capped_selection_size(ids.size(), unit_cost, budget_cap, fraction_cap);

  SplitMix64 rng(seed);
  plan.selected_ids =
      draw_without_replacement(std::move(ids), plan.n_selected, rng);
  return plan;
}

SubsetPlan plan_stratified_subset(
    const std::vector<std::pair<std::string, std::string>>& id_and_stratum,
    double unit_cost, double budget_cap, double fraction_cap,
    std::uint64_t seed) {
  if (id_and_stratum.empty()) throw UsageError("sample_ids must be non-empty");

  // Group ids per stratum; std::map keeps strata in lexicographic order.
  std::map<std::string, std::vector<std::string>> strata;
  std::set<std::string> all_ids;
  for (const auto& [id, stratum] : id_and_stratum) {
    if (stratum.empty()) {
      throw DataError("sample " + id + " has an empty stratum label");
    }
    if (!all_ids.insert(id).second) {
      throw DataError("duplicate sample_id: " + id);
    }
    strata[stratum].push_back(id);
  }

  SubsetPlan plan;
  plan.total_samples = id_and_stratum.size();
  plan.unit_cost = unit_cost;
  plan.budget_cap = budget_cap;
  plan.fraction_cap = fraction_cap;
  plan.seed = seed;
  plan.n_selected = capped_selection_size(plan.total_samples, unit_cost,
                                          budget_cap, fraction_cap);
  for (const auto& [id, stratum] : id_and_stratum) plan.strata[id] = stratum;

  // Proportional allocation with largest-remainder rounding. Remainder
  // ties go to the lexicographically first stratum name.
  const double total = static_cast<double>(plan.total_samples);
  std::size_t allocated = 0;
  std::vector<std::pair<double, std::string>> remainders;
  for (const auto& [name, ids] : strata) {
    const double quota = plan.n_selected * (ids.size() / total);
    const std::size_t base = static_cast<std::size_t>(std::floor(quota));
    plan.allocation[name] = base;
    allocated += base;
    remainders.emplace_back(quota - static_cast<double>(base), name);
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t i = 0; allocated < plan.n_selected; ++i) {
    plan.allocation[remainders[i % remainders.size()].second] += 1;
    ++allocated;
  }

  plan.coverage_warning = plan.n_selected < strata.size();
  if (!plan.coverage_warning) {
    // Guarantee one sample per stratum: move counts from the largest
    // allocations (lexicographically first among equals) to empty ones.
    for (auto& [name, count] : plan.allocation) {
      if (count > 0) continue;
      auto donor = plan.allocation.end();
      for (auto it = plan.allocation.begin(); it != plan.allocation.end();
           ++it) {
        if (donor == plan.allocation.end() || it->second > donor->second) {
          donor = it;
        }
      }
      donor->second -= 1;
      count += 1;
    }
  }

  SplitMix64 rng(seed);
  for (const auto& [name, ids] : strata) {
    const std::size_t take = plan.allocation.at(name);
    std::vector<std::string> sorted_ids = ids;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    if (take > sorted_ids.size()) {
      throw DataError("stratum " + name + " has " +
                      std::to_string(sorted_ids.size()) +
                      " samples but was allocated " + std::to_string(take));
    }
    std::vector<std::string> chosen =
        draw_without_replacement(std::move(sorted_ids), take, rng);
    plan.selected_ids.insert(plan.selected_ids.end(), chosen.begin(),
                             chosen.end());
  }
  std::sort(plan.selected_ids.begin(), plan.selected_ids.end());
  return plan;
}

}  // namespace evalstats
