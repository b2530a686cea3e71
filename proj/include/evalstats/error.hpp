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

#ifndef EVALSTATS_ERROR_HPP_
#define EVALSTATS_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evalstats {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input data. Carries the source name and 1-based line number of
// the offending line when known (line 0 means "not line-addressable").
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& reason)
      : Error(source + ":" + std::to_string(line) + ": " + reason),
        source_(source),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Structurally valid input that violates a semantic precondition (duplicate
// keys, ragged epochs, missing model, insufficient sample counts, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter passed by the caller (out-of-range threshold, bad cap,
// unsupported distribution, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace evalstats

#endif  // EVALSTATS_ERROR_HPP_
