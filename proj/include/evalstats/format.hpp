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

#ifndef EVALSTATS_FORMAT_HPP_
#define EVALSTATS_FORMAT_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace evalstats {

// Shortest decimal string that parses back to exactly the same double.
// Locale-independent.
std::string format_double_roundtrip(double value);

// Fixed 12-significant-digit general formatting, used for all analysis
// JSON output so repeated runs are byte-identical.
std::string format_double_sig12(double value);

// Serializes with sorted object keys and 12-significant-digit doubles.
// No whitespace; terminated without a newline.
std::string canonical_json(const nlohmann::json& value);

// Renders rows as a space-aligned text table; the first row is treated as
// a header and underlined.
std::string render_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace evalstats

#endif  // EVALSTATS_FORMAT_HPP_
