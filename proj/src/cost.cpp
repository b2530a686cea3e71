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

#include "evalstats/cost.hpp"

#include <cmath>
#include <sstream>

#include "evalstats/error.hpp"
#include "evalstats/format.hpp"
#include "json.hpp"

namespace evalstats {
namespace {

// Endpoint list prices in USD per million tokens, as published 2025-04-23.
// Bundled as a convenience default; pass an explicit price table for
// anything load-bearing, since list prices change without notice.
constexpr const char kDefaultPricesJsonl[] =
    R"({"model_id": "openai/gpt-4.5-preview-2025-02-27", "input_price": 75.0, "output_price": 150.0, "as_of": "2025-04-23"}
{"model_id": "openrouter/deepseek/deepseek-r1", "input_price": 0.55, "output_price": 2.19, "as_of": "2025-04-23"}
{"model_id": "openrouter/meta-llama/llama-3.2-90b-vision-instruct", "input_price": 0.35, "output_price": 0.4, "as_of": "2025-04-23"}
)";

// Measured full-run API costs (USD) for three public benchmarks across
// three endpoints, bundled as reference points for validation planning.
constexpr const char kReferenceCostsJsonl[] =
    R"({"eval_id": "gpqa-diamond", "model_id": "openai/gpt-4.5-preview-2025-02-27", "cost_usd": 81.27}
{"eval_id": "gpqa-diamond", "model_id": "openrouter/deepseek/deepseek-r1", "cost_usd": 1.09}
{"eval_id": "gpqa-diamond", "model_id": "openrouter/meta-llama/llama-3.2-90b-vision-instruct", "cost_usd": 0.57}
{"eval_id": "cybench", "model_id": "openai/gpt-4.5-preview-2025-02-27", "cost_usd": 197.14}
{"eval_id": "cybench", "model_id": "openrouter/deepseek/deepseek-r1", "cost_usd": 1.57}
{"eval_id": "cybench", "model_id": "openrouter/meta-llama/llama-3.2-90b-vision-instruct", "cost_usd": 2.26}
{"eval_id": "gaia-level-3", "model_id": "openai/gpt-4.5-preview-2025-02-27", "cost_usd": 1265.02}
{"eval_id": "gaia-level-3", "model_id": "openrouter/deepseek/deepseek-r1", "cost_usd": 9.37}
{"eval_id": "gaia-level-3", "model_id": "openrouter/meta-llama/llama-3.2-90b-vision-instruct", "cost_usd": 15.11}
)";

double require_price_field(const nlohmann::json& value, const std::string& key,
                           const std::string& source, int line) {
  if (!value.contains(key) || !value.at(key).is_number()) {
    throw ParseError(source, line, "missing numeric field: " + key);
  }
  const double price = value.at(key).get<double>();
  if (price < 0.0 || !std::isfinite(price)) {
    throw ParseError(source, line, key + " must be >= 0");
  }
  return price;
}

}  // namespace

CostEstimate estimate_cost(const TokenUsage& usage, const PriceEntry& prices,
                           std::optional<int> n_samples) {
  if (prices.model_id != usage.model_id) {
    throw DataError("price entry is for model " + prices.model_id +
                    ", usage is for model " + usage.model_id);
  }

  CostEstimate estimate;
  estimate.eval_id = usage.eval_id;
  estimate.model_id = usage.model_id;
  estimate.cost =
      (static_cast<double>(usage.input_tokens) * prices.input_price +
       static_cast<double>(usage.output_tokens) * prices.output_price) /
      1e6;
  if (n_samples.has_value()) {
    if (*n_samples < 1) {
      throw UsageError("n_samples must be >= 1, got " +
                       std::to_string(*n_samples));
    }
    estimate.unit_cost_per_sample = estimate.cost / *n_samples;
  }
  return estimate;
}

std::vector<PriceEntry> parse_price_table(std::istream& input,
                                          std::string_view source) {
  const std::string where(source);
  std::vector<PriceEntry> prices;
  std::string line;
  int line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json value;
    try {
      value = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& error) {
      throw ParseError(where, line_number, error.what());
    }
    if (!value.is_object()) {
      throw ParseError(where, line_number, "expected a JSON object");
    }
    if (!value.contains("model_id") || !value.at("model_id").is_string()) {
      throw ParseError(where, line_number, "missing string field: model_id");
    }

    PriceEntry entry;
    entry.model_id = value.at("model_id").get<std::string>();
    entry.input_price =
        require_price_field(value, "input_price", where, line_number);
    entry.output_price =
        require_price_field(value, "output_price", where, line_number);
    if (value.contains("as_of")) {
      if (!value.at("as_of").is_string()) {
        throw ParseError(where, line_number, "as_of must be a string");
      }
      entry.as_of = value.at("as_of").get<std::string>();
    }
    for (const PriceEntry& existing : prices) {
      if (existing.model_id == entry.model_id) {
        throw DataError("duplicate price entry for model " + entry.model_id);
      }
    }
    prices.push_back(std::move(entry));
  }
  return prices;
}

const std::vector<PriceEntry>& default_prices() {
  static const std::vector<PriceEntry> prices = [] {
    std::istringstream stream{kDefaultPricesJsonl};
    return parse_price_table(stream, "<builtin prices>");
  }();
  return prices;
}

const std::vector<ReferenceCost>& reference_costs() {
  static const std::vector<ReferenceCost> costs = [] {
    std::vector<ReferenceCost> parsed;
    std::istringstream stream{kReferenceCostsJsonl};
    std::string line;
    while (std::getline(stream, line)) {
      if (line.empty()) continue;
      const nlohmann::json value = nlohmann::json::parse(line);
      parsed.push_back(ReferenceCost{value.at("eval_id").get<std::string>(),
                                     value.at("model_id").get<std::string>(),
                                     value.at("cost_usd").get<double>()});
    }
    return parsed;
  }();
  return costs;
}

std::string_view reference_costs_jsonl() { return kReferenceCostsJsonl; }

double lookup_reference_cost(std::string_view eval_id,
                             std::string_view model_id) {
  for (const ReferenceCost& cost : reference_costs()) {
    if (cost.eval_id == eval_id && cost.model_id == model_id) {
      return cost.cost_usd;
    }
  }
  throw DataError("no reference cost for eval " + std::string(eval_id) +
                  " and model " + std::string(model_id));
}

}  // namespace evalstats
