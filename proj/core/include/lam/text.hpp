// Copyright 2026 The lam-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small string helpers shared by the recipe, rule and report formats.

#ifndef LAM_TEXT_HPP_
#define LAM_TEXT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lam::text
{

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delimiter);
std::string join(const std::vector<std::string>& parts, std::string_view separator);

std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Splits a line into whitespace-separated words. Double quotes group
/// characters (including whitespace) and are kept in the returned words so
/// that later passes can tell quoted text from operators. A `#` outside
/// quotes starts a comment.
std::vector<std::string> tokenize(std::string_view line);

/// Removes the double quotes a word was written with.
std::string unquote(std::string_view word);

/// Splits `key=value` at the first `=` outside quotes; both sides are
/// unquoted. Returns nullopt when the word has no unquoted `=`.
std::optional<std::pair<std::string, std::string>> split_assignment(std::string_view word);

/// Quotes a value when it would not survive `tokenize` as a single word.
std::string quote_if_needed(std::string_view value);

/// Numeric-aware ordering: two numbers compare by value, anything else
/// lexicographically, numbers before non-numbers.
bool label_less(std::string_view a, std::string_view b);

}  // namespace lam::text

#endif  // LAM_TEXT_HPP_
