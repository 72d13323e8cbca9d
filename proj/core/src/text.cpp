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

#include "lam/text.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace lam::text
{

std::string_view trim(std::string_view s)
{
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char delimiter)
{
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      break;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view separator)
{
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += separator;
    }
    out += parts[i];
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s)
{
  s = trim(s);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  std::int64_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_double(std::string_view s)
{
  s = trim(s);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  if (s == "inf") {
    return HUGE_VAL;
  }
  if (s == "-inf") {
    return -HUGE_VAL;
  }
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end || std::isnan(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_double(double value)
{
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  if (value == 0.0) {
    return "0";  // also folds -0
  }
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::vector<std::string> tokenize(std::string_view line)
{
  std::vector<std::string> words;
  std::string current;
  bool in_quotes = false;
  bool have_word = false;
  for (const char c : line) {
    if (in_quotes) {
      current += c;
      if (c == '"') {
        in_quotes = false;
      }
      continue;
    }
    if (c == '#') {
      break;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (have_word) {
        words.push_back(std::move(current));
        current.clear();
        have_word = false;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    }
    current += c;
    have_word = true;
  }
  if (have_word) {
    words.push_back(std::move(current));
  }
  return words;
}

std::string unquote(std::string_view word)
{
  std::string out;
  out.reserve(word.size());
  for (const char c : word) {
    if (c != '"') {
      out += c;
    }
  }
  return out;
}

std::optional<std::pair<std::string, std::string>> split_assignment(std::string_view word)
{
  bool in_quotes = false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == '"') {
      in_quotes = !in_quotes;
    } else if (word[i] == '=' && !in_quotes) {
      return std::make_pair(unquote(word.substr(0, i)), unquote(word.substr(i + 1)));
    }
  }
  return std::nullopt;
}

std::string quote_if_needed(std::string_view value)
{
  const bool needs = value.empty() ||
                     value.find_first_of(" \t=#,{}[]") != std::string_view::npos;
  if (!needs) {
    return std::string(value);
  }
  return "\"" + std::string(value) + "\"";
}

bool label_less(std::string_view a, std::string_view b)
{
  const auto na = parse_double(a);
  const auto nb = parse_double(b);
  if (na && nb) {
    if (*na != *nb) {
      return *na < *nb;
    }
    return a < b;
  }
  if (na != nb && (na || nb)) {
    return na.has_value();
  }
  return a < b;
}

}  // namespace lam::text
