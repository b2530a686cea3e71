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

// evalstats: uncertainty-aware analysis of evaluation score logs.
//
// Exit codes: 0 success (and passing `validate` runs), 1 failed `validate`
// check, 2 usage or data errors. All analysis commands honor --output
// table|json; JSON output is canonical (sorted keys, fixed float
// formatting), so equal inputs produce byte-identical output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evalstats/comparison.hpp"
#include "evalstats/cost.hpp"
#include "evalstats/error.hpp"
#include "evalstats/format.hpp"
#include "evalstats/ingest.hpp"
#include "evalstats/leaderboard.hpp"
#include "evalstats/records.hpp"
#include "evalstats/synthgen.hpp"
#include "evalstats/validation.hpp"
#include "evalstats/variance.hpp"

namespace {

using evalstats::CompareMode;
using evalstats::ComparisonResult;
using evalstats::Correction;
using evalstats::DataError;
using evalstats::LogFormat;
using evalstats::ModelScore;
using evalstats::RecordSet;
using evalstats::ScoreMatrix;
using evalstats::ToleranceMode;
using evalstats::UsageError;
using evalstats::VarianceComponents;

// Effective defaults after the precedence chain
// flag > environment > config file > built-in
// has been applied up to (but excluding) flags. Only EVALSTATS_SEED and
// EVALSTATS_OUTPUT exist as environment variables.
struct Defaults {
  double z = evalstats::kDefaultZ;
  double ratio = evalstats::kDefaultRatioThreshold;
  double tolerance = evalstats::kDefaultTolerance;
  std::string tolerance_mode = "absolute";
  double budget = evalstats::kDefaultBudgetCap;
  double fraction = evalstats::kDefaultFractionCap;
  std::uint64_t seed = 0;
  std::string output = "table";
};

double parse_double_setting(const std::string& text, const std::string& what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid number for " + what + ": '" + text + "'");
  }
  return value;
}

std::uint64_t parse_seed_setting(const std::string& text,
                                 const std::string& what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid seed for " + what + ": '" + text + "'");
  }
  return value;
}

std::string parse_output_setting(const std::string& text,
                                 const std::string& what) {
  if (text != "table" && text != "json") {
    throw UsageError(what + " must be 'table' or 'json', got '" + text + "'");
  }
  return text;
}

void apply_config_file(const std::string& path, Defaults& defaults) {
  std::ifstream input(path);
  if (!input) throw UsageError("cannot open config file: " + path);

  std::string line;
  int line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    const std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_number) +
                       ": expected key=value");
    }
    auto trim = [](std::string text) {
      const std::size_t first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos) return std::string();
      const std::size_t last = text.find_last_not_of(" \t\r");
      return text.substr(first, last - first + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = path + " key " + key;

    if (key == "z") {
      defaults.z = parse_double_setting(value, where);
    } else if (key == "ratio") {
      defaults.ratio = parse_double_setting(value, where);
    } else if (key == "tolerance") {
      defaults.tolerance = parse_double_setting(value, where);
    } else if (key == "tolerance_mode") {
      if (value != "absolute" && value != "relative") {
        throw UsageError(where + " must be 'absolute' or 'relative', got '" +
                         value + "'");
      }
      defaults.tolerance_mode = value;
    } else if (key == "budget") {
      defaults.budget = parse_double_setting(value, where);
    } else if (key == "fraction") {
      defaults.fraction = parse_double_setting(value, where);
    } else if (key == "seed") {
      defaults.seed = parse_seed_setting(value, where);
    } else if (key == "output") {
      defaults.output = parse_output_setting(value, where);
    } else {
      throw UsageError(path + ":" + std::to_string(line_number) +
                       ": unknown key '" + key + "'");
    }
  }
}

Defaults load_defaults(int argc, char** argv) {
  Defaults defaults;

  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      config_path = std::string(arg.substr(9));
    }
  }
  if (!config_path.empty()) apply_config_file(config_path, defaults);

  if (const char* seed = std::getenv("EVALSTATS_SEED")) {
    defaults.seed = parse_seed_setting(seed, "EVALSTATS_SEED");
  }
  if (const char* output = std::getenv("EVALSTATS_OUTPUT")) {
    defaults.output = parse_output_setting(output, "EVALSTATS_OUTPUT");
  }
  return defaults;
}

std::string fmt6(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

std::string fmt_cents(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

LogFormat to_format(const std::string& name) {
  return name == "csv" ? LogFormat::kCsv : LogFormat::kJsonl;
}

RecordSet load_records(const std::string& path, const std::string& format,
                       const std::string& score_range) {
  evalstats::ParseOptions options;
  options.free_score_range = score_range == "free";
  if (path == "-") {
    return evalstats::parse_records(
        std::cin, format.empty() ? LogFormat::kJsonl : to_format(format),
        options, "<stdin>");
  }
  if (format.empty()) return evalstats::parse_records_file(path, options);
  return evalstats::parse_records_file(path, to_format(format), options);
}

std::string resolve_eval(const RecordSet& records, const std::string& flag) {
  if (!flag.empty()) return flag;
  std::set<std::string> evals;
  for (const auto& record : records.records) evals.insert(record.eval_id);
  if (evals.size() == 1) return *evals.begin();
  std::string names;
  for (const auto& eval : evals) {
    if (!names.empty()) names += ", ";
    names += eval;
  }
  throw DataError("log contains " + std::to_string(evals.size()) +
                  " evals (" + names + "); pass --eval");
}

void emit_json(const std::string& command, nlohmann::json payload) {
  payload["schema_version"] = 1;
  payload["command"] = command;
  std::cout << evalstats::canonical_json(payload) << "\n";
}

nlohmann::json components_json(const VarianceComponents& components) {
  return {{"n_samples", components.n_samples},
          {"n_epochs", components.n_epochs},
          {"mean_within", components.mean_within},
          {"var_of_means", components.var_of_means},
          {"var_between", components.var_between},
          {"clamped", components.clamped}};
}

nlohmann::json comparison_json(const ComparisonResult& result) {
  nlohmann::json cell{
      {"mode", result.mode == CompareMode::kPaired ? "paired" : "unpaired"},
      {"eval_id", result.eval_id},
      {"model_a", result.model_a},
      {"model_b", result.model_b},
      {"delta", result.delta},
      {"std_error", result.std_error},
      {"ci_low", result.ci_low},
      {"ci_high", result.ci_high},
      {"z", result.z},
      {"n", result.n},
      {"significant", result.significant}};
  if (result.sd_d.has_value()) cell["sd_d"] = *result.sd_d;
  if (result.mode == CompareMode::kPaired) {
    cell["excluded_a"] = result.excluded_a;
    cell["excluded_b"] = result.excluded_b;
  }
  return cell;
}

std::string interval_text(double low, double high) {
  return "[" + fmt6(low) + ", " + fmt6(high) + "]";
}

// --- analyze-variance ------------------------------------------------------

struct VarianceArgs {
  std::string log;
  std::string format;
  std::string score_range = "strict";
  std::string eval;
  std::string model;
};

std::vector<std::pair<std::string, std::string>> matching_pairs(
    const RecordSet& records, const std::string& eval,
    const std::string& model) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& pair : evalstats::eval_model_pairs(records)) {
    if (!eval.empty() && pair.first != eval) continue;
    if (!model.empty() && pair.second != model) continue;
    pairs.push_back(pair);
  }
  if (pairs.empty()) {
    std::string filter;
    if (!eval.empty()) filter += " eval=" + eval;
    if (!model.empty()) filter += " model=" + model;
    throw DataError("no records match" +
                    (filter.empty() ? " (log is empty)" : filter));
  }
  return pairs;
}

int run_analyze_variance(const VarianceArgs& args, const std::string& output) {
  const RecordSet records =
      load_records(args.log, args.format, args.score_range);

  nlohmann::json results = nlohmann::json::array();
  std::vector<std::vector<std::string>> rows{{"eval", "model", "n", "k",
                                              "mean_within", "var_of_means",
                                              "var_between", "clamped"}};
  for (const auto& [eval, model] :
       matching_pairs(records, args.eval, args.model)) {
    const ScoreMatrix matrix = evalstats::build_matrix(records, eval, model);
    const VarianceComponents components =
        evalstats::variance_components(matrix);
    nlohmann::json entry = components_json(components);
    entry["eval_id"] = eval;
    entry["model_id"] = model;
    results.push_back(std::move(entry));
    rows.push_back({eval, model, std::to_string(components.n_samples),
                    std::to_string(components.n_epochs),
                    fmt6(components.mean_within),
                    fmt6(components.var_of_means),
                    fmt6(components.var_between),
                    components.clamped ? "yes" : "no"});
  }

  if (output == "json") {
    emit_json("analyze-variance", {{"results", std::move(results)}});
  } else {
    std::cout << evalstats::render_table(rows);
  }
  return 0;
}

// --- optimal-epochs --------------------------------------------------------

struct EpochArgs {
  std::string log;
  std::string format;
  std::string score_range = "strict";
  std::string eval;
  std::string model;
  double mean_within = 0.0;
  bool has_mean_within = false;
  double var_between = 0.0;
  bool has_var_between = false;
  double ratio = evalstats::kDefaultRatioThreshold;
  int k_max = 1000;
  bool show_components = false;
};

void print_recommendation(const std::string& label,
                          const VarianceComponents& components,
                          const evalstats::EpochRecommendation& rec,
                          int k_max, bool show_components) {
  if (show_components) {
    std::cout << label << "  n=" << components.n_samples
              << " k=" << components.n_epochs
              << " mean_within=" << fmt6(components.mean_within)
              << " var_of_means=" << fmt6(components.var_of_means)
              << " var_between=" << fmt6(components.var_between)
              << (components.clamped ? " (clamped)" : "") << "\n";
  }
  if (rec.k_star.has_value()) {
    std::cout << label << "  K* = " << *rec.k_star << "  (noise/K = "
              << fmt6(*rec.satisfied_value) << " <= " << fmt6(
                     rec.ratio_threshold)
              << " * var_between = "
              << fmt6(rec.ratio_threshold * components.var_between) << ")\n";
  } else {
    std::cout << label << "  no K <= " << k_max
              << " satisfies noise/K <= " << fmt6(rec.ratio_threshold)
              << " * var_between\n";
  }
}

int run_optimal_epochs(const EpochArgs& args, const std::string& output) {
  const bool direct = args.has_mean_within || args.has_var_between;
  if (direct && !(args.has_mean_within && args.has_var_between)) {
    throw UsageError("--mean-within and --var-between must be given together");
  }
  if (direct && !args.log.empty()) {
    throw UsageError("pass either --log or explicit variance components");
  }
  if (!direct && args.log.empty()) {
    throw UsageError("pass --log or --mean-within/--var-between");
  }

  nlohmann::json results = nlohmann::json::array();
  auto add_result = [&](const std::string& eval, const std::string& model,
                        const VarianceComponents& components) {
    const evalstats::EpochRecommendation rec =
        evalstats::optimal_epochs(components, args.ratio, args.k_max);
    nlohmann::json entry{{"components", components_json(components)}};
    entry["eval_id"] = eval.empty() ? nlohmann::json() : nlohmann::json(eval);
    entry["model_id"] =
        model.empty() ? nlohmann::json() : nlohmann::json(model);
    entry["k_star"] =
        rec.k_star.has_value() ? nlohmann::json(*rec.k_star) : nlohmann::json();
    entry["satisfied_value"] = rec.satisfied_value.has_value()
                                   ? nlohmann::json(*rec.satisfied_value)
                                   : nlohmann::json();
    results.push_back(std::move(entry));
    if (output != "json") {
      const std::string label =
          eval.empty() ? std::string("(components)") : eval + " " + model;
      print_recommendation(label, components, rec, args.k_max,
                           args.show_components);
    }
  };

  if (direct) {
    if (args.mean_within < 0.0 || args.var_between < 0.0) {
      throw UsageError("variance components must be >= 0");
    }
    VarianceComponents components;
    components.mean_within = args.mean_within;
    components.var_between = args.var_between;
    add_result("", "", components);
  } else {
    const RecordSet records =
        load_records(args.log, args.format, args.score_range);
    for (const auto& [eval, model] :
         matching_pairs(records, args.eval, args.model)) {
      add_result(eval, model,
                 evalstats::variance_components(
                     evalstats::build_matrix(records, eval, model)));
    }
  }

  if (output == "json") {
    emit_json("optimal-epochs", {{"ratio_threshold", args.ratio},
                                 {"k_max", args.k_max},
                                 {"results", std::move(results)}});
  }
  return 0;
}

// --- compare ----------------------------------------------------------------

struct CompareArgs {
  std::string log;
  std::string format;
  std::string score_range = "strict";
  std::string eval;
  std::string model_a;
  std::string model_b;
  std::string mode = "paired";
  double z = evalstats::kDefaultZ;
};

int run_compare(const CompareArgs& args, const std::string& output) {
  const RecordSet records =
      load_records(args.log, args.format, args.score_range);
  const std::string eval = resolve_eval(records, args.eval);
  const ScoreMatrix a = evalstats::build_matrix(records, eval, args.model_a);
  const ScoreMatrix b = evalstats::build_matrix(records, eval, args.model_b);

  std::vector<std::pair<std::string, ComparisonResult>> results;
  if (args.mode == "paired" || args.mode == "both") {
    results.emplace_back("paired", evalstats::paired_compare(a, b, args.z));
  }
  if (args.mode == "unpaired" || args.mode == "both") {
    results.emplace_back(
        "unpaired", evalstats::unpaired_compare(evalstats::model_score(a),
                                                evalstats::model_score(b),
                                                args.z));
  }

  if (output == "json") {
    if (args.mode == "both") {
      nlohmann::json modes;
      for (const auto& [label, result] : results) {
        modes[label] = comparison_json(result);
      }
      emit_json("compare", {{"results", modes}});
    } else {
      emit_json("compare",
                {{"result", comparison_json(results.front().second)}});
    }
    return 0;
  }

  for (const auto& [label, result] : results) {
    std::cout << label << " comparison on " << eval << "\n"
              << "  " << args.model_a << " vs " << args.model_b << "\n"
              << "  delta        " << fmt6(result.delta) << "\n"
              << "  std error    " << fmt6(result.std_error) << "\n";
    if (result.sd_d.has_value()) {
      std::cout << "  sd of diffs  " << fmt6(*result.sd_d) << "\n";
    }
    std::cout << "  ci (z=" << fmt6(result.z) << ")  "
              << interval_text(result.ci_low, result.ci_high) << "\n"
              << "  n            " << result.n;
    if (result.mode == CompareMode::kPaired &&
        (result.excluded_a > 0 || result.excluded_b > 0)) {
      std::cout << "  (excluded " << result.excluded_a << " from "
                << args.model_a << ", " << result.excluded_b << " from "
                << args.model_b << ")";
    }
    std::cout << "\n"
              << "  significant  " << (result.significant ? "yes" : "no")
              << "\n";
  }
  return 0;
}

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
  double observed = 0.0;
  bool has_observed = false;
  double reference = 0.0;
  double tolerance = evalstats::kDefaultTolerance;
  std::string mode = "absolute";
  std::string log;
  std::string format;
  std::string score_range = "strict";
  std::string eval;
  std::string model;
};

int run_validate(const ValidateArgs& args, const std::string& output) {
  double observed = args.observed;
  if (!args.log.empty()) {
    if (args.has_observed) {
      throw UsageError("pass either --observed or --log, not both");
    }
    if (args.model.empty()) {
      throw UsageError("--log requires --model to pick the re-implementation");
    }
    const RecordSet records =
        load_records(args.log, args.format, args.score_range);
    const std::string eval = resolve_eval(records, args.eval);
    observed =
        evalstats::model_score(evalstats::build_matrix(records, eval,
                                                       args.model))
            .score;
  } else if (!args.has_observed) {
    throw UsageError("pass --observed or --log");
  }

  const evalstats::ToleranceCheck check = evalstats::check_reference(
      observed, args.reference, args.tolerance,
      args.mode == "relative" ? ToleranceMode::kRelative
                              : ToleranceMode::kAbsolute);

  if (output == "json") {
    emit_json("validate",
              {{"result",
                {{"observed", check.observed},
                 {"reference", check.reference},
                 {"tolerance", check.tolerance},
                 {"mode", args.mode},
                 {"deviation", check.deviation},
                 {"passed", check.passed}}}});
  } else {
    const double allowed = args.mode == "relative"
                               ? check.tolerance * std::abs(check.reference)
                               : check.tolerance;
    std::cout << (check.passed ? "PASS" : "FAIL") << ": observed "
              << fmt6(check.observed) << " vs reference "
              << fmt6(check.reference) << ", |deviation| "
              << fmt6(std::abs(check.deviation))
              << (check.passed ? " <= " : " > ") << fmt6(allowed) << "\n";
  }
  return check.passed ? 0 : 1;
}

// --- plan-subset -------------------------------------------------------------

struct PlanArgs {
  std::string log;
  std::string ids_file;
  std::string strata_file;
  std::string format;
  std::string score_range = "strict";
  std::string eval;
  std::string model;
  double unit_cost = 0.0;
  double budget = evalstats::kDefaultBudgetCap;
  double fraction = evalstats::kDefaultFractionCap;
  std::uint64_t seed = 0;
};

std::vector<std::string> gather_ids(const PlanArgs& args) {
  std::set<std::string> ids;
  if (!args.ids_file.empty()) {
    std::ifstream input(args.ids_file);
    if (!input) throw UsageError("cannot open ids file: " + args.ids_file);
    std::string line;
    while (std::getline(input, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      if (!ids.insert(line).second) {
        throw DataError("duplicate sample_id: " + line);
      }
    }
  } else {
    const RecordSet records =
        load_records(args.log, args.format, args.score_range);
    const std::string eval = resolve_eval(records, args.eval);
    for (const auto& record : records.records) {
      if (record.eval_id != eval) continue;
      if (!args.model.empty() && record.model_id != args.model) continue;
      ids.insert(record.sample_id);
    }
    if (ids.empty()) {
      throw DataError("no records match eval=" + eval +
                      (args.model.empty() ? "" : " model=" + args.model));
    }
  }
  return {ids.begin(), ids.end()};
}

// Strata file: CSV with header `sample_id,stratum`, no quoting.
std::map<std::string, std::string> load_strata(const std::string& path) {
  std::ifstream input(path);
  if (!input) throw UsageError("cannot open strata file: " + path);

  std::map<std::string, std::string> strata;
  std::string line;
  int line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw evalstats::ParseError(path, line_number,
                                  "expected sample_id,stratum");
    }
    const std::string id = line.substr(0, comma);
    const std::string stratum = line.substr(comma + 1);
    if (line_number == 1) {
      if (id != "sample_id" || stratum != "stratum") {
        throw evalstats::ParseError(path, 1,
                                    "header must be sample_id,stratum");
      }
      continue;
    }
    if (!strata.emplace(id, stratum).second) {
      throw DataError("duplicate sample_id in strata file: " + id);
    }
  }
  return strata;
}

int run_plan_subset(const PlanArgs& args, const std::string& output) {
  const std::vector<std::string> ids = gather_ids(args);

  evalstats::SubsetPlan plan;
  if (!args.strata_file.empty()) {
    const std::map<std::string, std::string> strata =
        load_strata(args.strata_file);
    std::vector<std::pair<std::string, std::string>> id_and_stratum;
    id_and_stratum.reserve(ids.size());
    for (const std::string& id : ids) {
      const auto it = strata.find(id);
      if (it == strata.end()) {
        throw DataError("sample " + id + " is missing from the strata file");
      }
      id_and_stratum.emplace_back(id, it->second);
    }
    plan = evalstats::plan_stratified_subset(id_and_stratum, args.unit_cost,
                                             args.budget, args.fraction,
                                             args.seed);
  } else {
    plan = evalstats::plan_subset(ids, args.unit_cost, args.budget,
                                  args.fraction, args.seed);
  }

  if (plan.coverage_warning) {
    std::cerr << "warning: selection is smaller than the number of strata;"
              << " some strata are uncovered\n";
  }

  if (output == "json") {
    nlohmann::json body{{"total_samples", plan.total_samples},
                        {"unit_cost", plan.unit_cost},
                        {"budget_cap", plan.budget_cap},
                        {"fraction_cap", plan.fraction_cap},
                        {"seed", plan.seed},
                        {"n_selected", plan.n_selected},
                        {"selected_ids", plan.selected_ids},
                        {"coverage_warning", plan.coverage_warning}};
    if (!plan.allocation.empty()) body["allocation"] = plan.allocation;
    emit_json("plan-subset", {{"plan", std::move(body)}});
    return 0;
  }

  std::cout << "total " << plan.total_samples << "  unit cost "
            << fmt6(plan.unit_cost) << "  budget " << fmt6(plan.budget_cap)
            << "  fraction " << fmt6(plan.fraction_cap) << "  seed "
            << plan.seed << "\n"
            << "selected " << plan.n_selected << " (estimated cost "
            << fmt_cents(static_cast<double>(plan.n_selected) *
                         plan.unit_cost)
            << ")\n";
  if (!plan.allocation.empty()) {
    std::cout << "allocation:";
    for (const auto& [name, count] : plan.allocation) {
      std::cout << " " << name << "=" << count;
    }
    std::cout << "\n";
  }
  for (const std::string& id : plan.selected_ids) std::cout << id << "\n";
  return 0;
}

// --- estimate-cost -----------------------------------------------------------

struct CostArgs {
  std::string usage_file;
  std::string prices_file;
  bool show_reference = false;
  int samples = 0;
  bool has_samples = false;
  std::string eval;
  std::string model;
};

int run_estimate_cost(const CostArgs& args, const std::string& output) {
  if (args.show_reference) {
    if (!args.usage_file.empty()) {
      throw UsageError("--reference does not take --usage");
    }
    if (output == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& cost : evalstats::reference_costs()) {
        rows.push_back({{"eval_id", cost.eval_id},
                        {"model_id", cost.model_id},
                        {"cost_usd", cost.cost_usd}});
      }
      emit_json("estimate-cost", {{"reference_costs", std::move(rows)}});
    } else {
      std::vector<std::vector<std::string>> rows{{"eval", "model", "cost"}};
      for (const auto& cost : evalstats::reference_costs()) {
        rows.push_back({cost.eval_id, cost.model_id,
                        fmt_cents(cost.cost_usd)});
      }
      std::cout << evalstats::render_table(rows);
    }
    return 0;
  }

  if (args.usage_file.empty()) {
    throw UsageError("pass --usage FILE or --reference");
  }
  std::ifstream usage_input(args.usage_file);
  if (!usage_input) {
    throw UsageError("cannot open usage file: " + args.usage_file);
  }
  std::vector<evalstats::TokenUsage> usage =
      evalstats::parse_token_usage(usage_input, args.usage_file);

  std::vector<evalstats::PriceEntry> prices;
  if (args.prices_file.empty()) {
    prices = evalstats::default_prices();
  } else {
    std::ifstream prices_input(args.prices_file);
    if (!prices_input) {
      throw UsageError("cannot open price table: " + args.prices_file);
    }
    prices = evalstats::parse_price_table(prices_input, args.prices_file);
  }

  nlohmann::json results = nlohmann::json::array();
  std::vector<std::vector<std::string>> rows{{"eval", "model", "cost",
                                              "unit"}};
  bool any = false;
  for (const evalstats::TokenUsage& row : usage) {
    if (!args.eval.empty() && row.eval_id != args.eval) continue;
    if (!args.model.empty() && row.model_id != args.model) continue;
    any = true;

    const evalstats::PriceEntry* entry = nullptr;
    for (const auto& candidate : prices) {
      if (candidate.model_id == row.model_id) {
        entry = &candidate;
        break;
      }
    }
    if (entry == nullptr) {
      throw DataError("no price entry for model " + row.model_id);
    }
    const evalstats::CostEstimate estimate = evalstats::estimate_cost(
        row, *entry,
        args.has_samples ? std::optional<int>(args.samples) : std::nullopt);

    nlohmann::json item{{"eval_id", estimate.eval_id},
                        {"model_id", estimate.model_id},
                        {"cost", estimate.cost},
                        {"price_as_of", entry->as_of}};
    if (estimate.unit_cost_per_sample.has_value()) {
      item["unit_cost_per_sample"] = *estimate.unit_cost_per_sample;
    }
    results.push_back(std::move(item));
    rows.push_back({estimate.eval_id, estimate.model_id,
                    fmt_cents(estimate.cost),
                    estimate.unit_cost_per_sample.has_value()
                        ? fmt6(*estimate.unit_cost_per_sample)
                        : "-"});
  }
  if (!any) throw DataError("no usage rows match the given filters");

  if (output == "json") {
    emit_json("estimate-cost", {{"results", std::move(results)}});
  } else {
    std::cout << evalstats::render_table(rows);
  }
  return 0;
}

// --- leaderboard --------------------------------------------------------------

struct LeaderboardArgs {
  std::string log;
  std::string format;
  std::string score_range = "strict";
  std::string eval;
  double z = evalstats::kDefaultZ;
  std::string mode = "paired";
  std::string correction = "none";
  bool pairwise = false;
};

int run_leaderboard(const LeaderboardArgs& args, const std::string& output) {
  const RecordSet records =
      load_records(args.log, args.format, args.score_range);
  const std::string eval = resolve_eval(records, args.eval);

  std::vector<ScoreMatrix> matrices;
  for (const auto& [pair_eval, model] : evalstats::eval_model_pairs(records)) {
    if (pair_eval != eval) continue;
    matrices.push_back(evalstats::build_matrix(records, eval, model));
  }
  if (matrices.empty()) throw DataError("no records match eval=" + eval);

  std::vector<ModelScore> scores;
  scores.reserve(matrices.size());
  for (const ScoreMatrix& matrix : matrices) {
    scores.push_back(evalstats::model_score(matrix));
  }
  const std::vector<evalstats::LeaderboardEntry> entries =
      evalstats::build_leaderboard(scores, args.z);

  const bool want_grid = args.pairwise && matrices.size() >= 2;
  evalstats::PairwiseGrid grid;
  if (want_grid) {
    grid = evalstats::pairwise_grid(
        matrices,
        args.mode == "paired" ? CompareMode::kPaired : CompareMode::kUnpaired,
        args.z,
        args.correction == "bonferroni" ? Correction::kBonferroni
                                        : Correction::kNone);
  }

  if (output == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& entry : entries) {
      rows.push_back({{"rank", entry.rank},
                      {"model_id", entry.model_id},
                      {"score", entry.score},
                      {"std_error", entry.std_error},
                      {"ci_low", entry.ci_low},
                      {"ci_high", entry.ci_high},
                      {"tie_group", entry.tie_group}});
    }
    nlohmann::json payload{
        {"eval_id", eval}, {"z", args.z}, {"entries", std::move(rows)}};
    if (want_grid) {
      nlohmann::json cells = nlohmann::json::array();
      const int m = static_cast<int>(grid.model_ids.size());
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          cells.push_back(comparison_json(*grid.at(i, j)));
        }
      }
      payload["pairwise"] = {{"model_ids", grid.model_ids},
                             {"correction", args.correction},
                             {"z_effective", grid.z_effective},
                             {"cells", std::move(cells)}};
    }
    emit_json("leaderboard", std::move(payload));
    return 0;
  }

  std::vector<std::vector<std::string>> rows{
      {"rank", "model", "score", "se", "ci", "group"}};
  for (const auto& entry : entries) {
    rows.push_back({std::to_string(entry.rank), entry.model_id,
                    fmt6(entry.score), fmt6(entry.std_error),
                    interval_text(entry.ci_low, entry.ci_high),
                    std::to_string(entry.tie_group)});
  }
  std::cout << evalstats::render_table(rows);

  if (want_grid) {
    std::cout << "\npairwise (" << args.mode << ", z_eff = "
              << fmt6(grid.z_effective) << ")\n";
    const int m = static_cast<int>(grid.model_ids.size());
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const ComparisonResult& cell = *grid.at(i, j);
        std::cout << "  " << cell.model_a << " vs " << cell.model_b << ": "
                  << fmt6(cell.delta) << " "
                  << interval_text(cell.ci_low, cell.ci_high)
                  << (cell.significant ? "  significant" : "") << "\n";
      }
    }
  }
  return 0;
}

// --- synth ---------------------------------------------------------------------

struct SynthArgs {
  int questions = 100;
  int epochs = 1;
  std::string difficulty = "uniform:0,1";
  bool pair = false;
  double delta = 0.0;
  double correlation = 1.0;
  std::uint64_t seed = 0;
  std::string eval_id = "synthetic";
  std::string model_a = "model-a";
  std::string model_b = "model-b";
  std::string out;
  std::string format = "jsonl";
};

void append_matrix_records(const ScoreMatrix& matrix, RecordSet& set) {
  for (int i = 0; i < matrix.n_samples(); ++i) {
    for (int k = 0; k < matrix.epochs; ++k) {
      set.records.push_back({matrix.eval_id, matrix.model_id,
                             matrix.sample_ids[static_cast<std::size_t>(i)],
                             k + 1, matrix.at(i, k)});
    }
  }
}

int run_synth(const SynthArgs& args) {
  evalstats::SyntheticSpec spec;
  spec.n_questions = args.questions;
  spec.n_epochs = args.epochs;
  spec.difficulty = evalstats::parse_difficulty(args.difficulty);
  spec.true_delta = args.delta;
  spec.correlation = args.correlation;
  spec.seed = args.seed;
  spec.eval_id = args.eval_id;
  spec.model_a = args.model_a;
  spec.model_b = args.model_b;

  RecordSet set;
  if (args.pair) {
    const evalstats::SyntheticPair pair = evalstats::generate_pair(spec);
    append_matrix_records(pair.a, set);
    append_matrix_records(pair.b, set);
    if (pair.clamp_warning) {
      std::cerr << "warning: " << pair.clamped_questions << " of "
                << args.questions
                << " shifted probabilities were clamped to [0, 1]; the"
                << " effective difference is smaller than --delta\n";
    }
  } else {
    append_matrix_records(evalstats::generate_single(spec), set);
  }

  const LogFormat format = to_format(args.format);
  if (args.out.empty() || args.out == "-") {
    evalstats::write_records(std::cout, set, format);
  } else {
    std::ofstream output(args.out);
    if (!output) throw UsageError("cannot open output file: " + args.out);
    evalstats::write_records(output, set, format);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Defaults defaults;
  try {
    defaults = load_defaults(argc, argv);
  } catch (const evalstats::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }

  CLI::App app{"uncertainty-aware analysis of evaluation score logs"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value file with defaults (z, ratio, tolerance, "
                 "tolerance_mode, budget, fraction, seed, output)");
  std::string output = defaults.output;
  app.add_option("--output", output,
                 "output mode (env override: EVALSTATS_OUTPUT)")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  const auto add_log_options = [](CLI::App* cmd, std::string& log,
                                  std::string& format,
                                  std::string& score_range,
                                  bool required = true) {
    auto* opt = cmd->add_option("--log", log,
                                "score log (JSONL or CSV; '-' for stdin)");
    if (required) opt->required();
    cmd->add_option("--format", format, "force the input format")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    cmd->add_option("--score-range", score_range,
                    "accept scores outside [0, 1]")
        ->check(CLI::IsMember({"strict", "free"}))
        ->capture_default_str();
  };

  VarianceArgs variance_args;
  auto* variance_cmd = app.add_subcommand(
      "analyze-variance", "decompose score variance per (eval, model)");
  add_log_options(variance_cmd, variance_args.log, variance_args.format,
                  variance_args.score_range);
  variance_cmd->add_option("--eval", variance_args.eval, "filter by eval_id");
  variance_cmd->add_option("--model", variance_args.model,
                           "filter by model_id");

  EpochArgs epoch_args;
  epoch_args.ratio = defaults.ratio;
  auto* epoch_cmd = app.add_subcommand(
      "optimal-epochs", "minimal epoch count that drowns model noise");
  add_log_options(epoch_cmd, epoch_args.log, epoch_args.format,
                  epoch_args.score_range, /*required=*/false);
  epoch_cmd->add_option("--eval", epoch_args.eval, "filter by eval_id");
  epoch_cmd->add_option("--model", epoch_args.model, "filter by model_id");
  auto* mean_within_opt = epoch_cmd->add_option(
      "--mean-within", epoch_args.mean_within, "mean within-sample variance");
  auto* var_between_opt = epoch_cmd->add_option(
      "--var-between", epoch_args.var_between, "between-sample variance");
  epoch_cmd->add_option("--ratio", epoch_args.ratio, "threshold c")
      ->capture_default_str();
  epoch_cmd->add_option("--k-max", epoch_args.k_max, "largest K considered")
      ->capture_default_str();
  epoch_cmd->add_flag("--components", epoch_args.show_components,
                      "also print the variance components");

  CompareArgs compare_args;
  compare_args.z = defaults.z;
  auto* compare_cmd =
      app.add_subcommand("compare", "two-model difference with CI");
  add_log_options(compare_cmd, compare_args.log, compare_args.format,
                  compare_args.score_range);
  compare_cmd->add_option("--eval", compare_args.eval,
                          "eval_id (required when the log has several)");
  compare_cmd->add_option("--model-a", compare_args.model_a, "first model")
      ->required();
  compare_cmd->add_option("--model-b", compare_args.model_b, "second model")
      ->required();
  compare_cmd->add_option("--mode", compare_args.mode, "comparison mode")
      ->check(CLI::IsMember({"paired", "unpaired", "both"}))
      ->capture_default_str();
  compare_cmd->add_option("--z", compare_args.z, "normal critical value")
      ->capture_default_str();

  ValidateArgs validate_args;
  validate_args.tolerance = defaults.tolerance;
  validate_args.mode = defaults.tolerance_mode;
  auto* validate_cmd = app.add_subcommand(
      "validate", "check an observed score against a reference");
  auto* observed_opt = validate_cmd->add_option(
      "--observed", validate_args.observed, "observed score");
  validate_cmd
      ->add_option("--reference", validate_args.reference, "reference score")
      ->required();
  validate_cmd
      ->add_option("--tolerance", validate_args.tolerance,
                   "allowed deviation")
      ->capture_default_str();
  validate_cmd->add_option("--mode", validate_args.mode, "tolerance mode")
      ->check(CLI::IsMember({"absolute", "relative"}))
      ->capture_default_str();
  add_log_options(validate_cmd, validate_args.log, validate_args.format,
                  validate_args.score_range, /*required=*/false);
  validate_cmd->add_option("--eval", validate_args.eval,
                           "eval_id (with --log)");
  validate_cmd->add_option("--model", validate_args.model,
                           "model_id (with --log)");

  PlanArgs plan_args;
  plan_args.budget = defaults.budget;
  plan_args.fraction = defaults.fraction;
  plan_args.seed = defaults.seed;
  auto* plan_cmd = app.add_subcommand(
      "plan-subset", "budget-capped validation subset of sample ids");
  add_log_options(plan_cmd, plan_args.log, plan_args.format,
                  plan_args.score_range, /*required=*/false);
  auto* ids_opt = plan_cmd->add_option("--ids", plan_args.ids_file,
                                       "file with one sample_id per line");
  plan_cmd->add_option("--eval", plan_args.eval, "eval_id (with --log)");
  plan_cmd->add_option("--model", plan_args.model, "model_id (with --log)");
  plan_cmd->add_option("--strata", plan_args.strata_file,
                       "CSV sample_id,stratum for stratified planning");
  plan_cmd
      ->add_option("--unit-cost", plan_args.unit_cost,
                   "estimated cost per sample")
      ->required();
  plan_cmd->add_option("--budget", plan_args.budget, "budget cap")
      ->capture_default_str();
  plan_cmd->add_option("--fraction", plan_args.fraction, "fraction cap")
      ->capture_default_str();
  plan_cmd
      ->add_option("--seed", plan_args.seed,
                   "selection seed (env override: EVALSTATS_SEED)")
      ->capture_default_str();

  CostArgs cost_args;
  auto* cost_cmd = app.add_subcommand(
      "estimate-cost", "token-usage based evaluation cost estimate");
  cost_cmd->add_option("--usage", cost_args.usage_file,
                       "token usage JSONL (eval_id, model_id, input_tokens, "
                       "output_tokens)");
  cost_cmd->add_option("--prices", cost_args.prices_file,
                       "price table JSONL (defaults to the bundled table)");
  auto* samples_opt = cost_cmd->add_option(
      "--samples", cost_args.samples, "sample count for per-sample cost");
  cost_cmd->add_option("--eval", cost_args.eval, "filter by eval_id");
  cost_cmd->add_option("--model", cost_args.model, "filter by model_id");
  cost_cmd->add_flag("--reference", cost_args.show_reference,
                     "print the bundled reference cost table");

  LeaderboardArgs leaderboard_args;
  leaderboard_args.z = defaults.z;
  auto* leaderboard_cmd = app.add_subcommand(
      "leaderboard", "rank models with CIs and overlap tie groups");
  add_log_options(leaderboard_cmd, leaderboard_args.log,
                  leaderboard_args.format, leaderboard_args.score_range);
  leaderboard_cmd->add_option("--eval", leaderboard_args.eval,
                              "eval_id (required when the log has several)");
  leaderboard_cmd
      ->add_option("--z", leaderboard_args.z, "normal critical value")
      ->capture_default_str();
  leaderboard_cmd
      ->add_option("--mode", leaderboard_args.mode, "pairwise comparison mode")
      ->check(CLI::IsMember({"paired", "unpaired"}))
      ->capture_default_str();
  leaderboard_cmd
      ->add_option("--correction", leaderboard_args.correction,
                   "multiple-comparison correction for the pairwise grid")
      ->check(CLI::IsMember({"none", "bonferroni"}))
      ->capture_default_str();
  leaderboard_cmd->add_flag("--grid", leaderboard_args.pairwise,
                            "include the all-pairs comparison grid");

  SynthArgs synth_args;
  synth_args.seed = defaults.seed;
  auto* synth_cmd = app.add_subcommand(
      "synth", "seeded synthetic score log with known ground truth");
  synth_cmd->add_option("--questions", synth_args.questions, "question count")
      ->capture_default_str();
  synth_cmd->add_option("--epochs", synth_args.epochs, "epochs per question")
      ->capture_default_str();
  synth_cmd
      ->add_option("--difficulty", synth_args.difficulty,
                   "uniform:LOW,HIGH | beta:ALPHA,BETA | fixed:P[,P...]")
      ->capture_default_str();
  synth_cmd->add_flag("--pair", synth_args.pair,
                      "generate two models with a known difference");
  synth_cmd
      ->add_option("--delta", synth_args.delta,
                   "true A - B difference (with --pair)")
      ->capture_default_str();
  synth_cmd
      ->add_option("--correlation", synth_args.correlation,
                   "shared-difficulty weight in [0, 1] (with --pair)")
      ->capture_default_str();
  synth_cmd
      ->add_option("--seed", synth_args.seed,
                   "generator seed (env override: EVALSTATS_SEED)")
      ->capture_default_str();
  synth_cmd->add_option("--eval-id", synth_args.eval_id, "eval_id to emit")
      ->capture_default_str();
  synth_cmd->add_option("--model-a", synth_args.model_a, "first model id")
      ->capture_default_str();
  synth_cmd->add_option("--model-b", synth_args.model_b,
                        "second model id (with --pair)")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out,
                        "output path (default stdout)");
  synth_cmd->add_option("--format", synth_args.format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();

  const std::string env_note =
      "Environment overrides: EVALSTATS_SEED (--seed), "
      "EVALSTATS_OUTPUT (--output).";
  app.footer(env_note);
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->footer(env_note);
    sub->fallthrough();  // accept --output/--config after the subcommand too
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  epoch_args.has_mean_within = mean_within_opt->count() > 0;
  epoch_args.has_var_between = var_between_opt->count() > 0;
  validate_args.has_observed = observed_opt->count() > 0;
  cost_args.has_samples = samples_opt->count() > 0;
  if (ids_opt->count() > 0 && !plan_args.log.empty()) {
    std::cerr << "error: pass either --log or --ids, not both\n";
    return 2;
  }
  if (ids_opt->count() == 0 && plan_cmd->parsed() && plan_args.log.empty()) {
    std::cerr << "error: plan-subset needs --log or --ids\n";
    return 2;
  }

  try {
    if (variance_cmd->parsed()) return run_analyze_variance(variance_args,
                                                            output);
    if (epoch_cmd->parsed()) return run_optimal_epochs(epoch_args, output);
    if (compare_cmd->parsed()) return run_compare(compare_args, output);
    if (validate_cmd->parsed()) return run_validate(validate_args, output);
    if (plan_cmd->parsed()) return run_plan_subset(plan_args, output);
    if (cost_cmd->parsed()) return run_estimate_cost(cost_args, output);
    if (leaderboard_cmd->parsed()) return run_leaderboard(leaderboard_args,
                                                          output);
    if (synth_cmd->parsed()) return run_synth(synth_args);
  } catch (const evalstats::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
