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

#ifndef EVALSTATS_COST_HPP_
#define EVALSTATS_COST_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evalstats/records.hpp"

namespace evalstats {

// Price of one model endpoint, in currency units per million tokens.
struct PriceEntry {
  std::string model_id;
  double input_price = 0.0;
  double output_price = 0.0;
  std::string as_of;  // date the prices were sampled, YYYY-MM-DD
};

struct CostEstimate {
  std::string eval_id;
  std::string model_id;
  double cost = 0.0;  // stored unrounded; display rounds to cents
  std::optional<double> unit_cost_per_sample;  // cost / N when N supplied
};

// One published evaluation-cost figure from the bundled reference table.
struct ReferenceCost {
  std::string eval_id;
  std::string model_id;
  double cost_usd = 0.0;
};

// cost = (input_tokens * input_price + output_tokens * output_price) / 1e6.
// The usage and price entries must name the same model.
CostEstimate estimate_cost(const TokenUsage& usage, const PriceEntry& prices,
                           std::optional<int> n_samples = std::nullopt);

// Price-table file: JSONL with keys model_id, input_price, output_price,
// as_of. Duplicate model_ids within one file are an error.
std::vector<PriceEntry> parse_price_table(std::istream& input,
                                          std::string_view source = "<stream>");

// Built-in price table (endpoint list prices; override with a user file
// for anything current).
const std::vector<PriceEntry>& default_prices();

// Bundled reference table of published evaluation costs, parsed from the
// JSONL data compiled into the library.
const std::vector<ReferenceCost>& reference_costs();

// The raw bundled JSONL, for display and export.
std::string_view reference_costs_jsonl();

// Returns the published figure for (eval_id, model_id) verbatim; unknown
// pairs raise DataError naming the pair.
double lookup_reference_cost(std::string_view eval_id,
                             std::string_view model_id);

}  // namespace evalstats

#endif  // EVALSTATS_COST_HPP_
