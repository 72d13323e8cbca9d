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

#include "lam/predicate.hpp"

#include <algorithm>

#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{
namespace
{

std::vector<std::string> split_unquoted_commas(std::string_view body)
{
  std::vector<std::string> items;
  std::string current;
  bool in_quotes = false;
  for (const char c : body) {
    if (c == '"') {
      in_quotes = !in_quotes;
      current += c;
    } else if (c == ',' && !in_quotes) {
      items.push_back(text::unquote(text::trim(current)));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!text::trim(current).empty() || !items.empty()) {
    items.push_back(text::unquote(text::trim(current)));
  }
  return items;
}

Condition parse_one(std::span<const std::string> words)
{
  if (words.size() < 3) {
    throw ConfigError("incomplete condition '" +
                      text::join(std::vector<std::string>(words.begin(), words.end()), " ") + "'");
  }
  Condition c;
  c.feature = text::unquote(words[0]);
  const std::string& op = words[1];
  if (op == "in") {
    std::string body;
    for (std::size_t i = 2; i < words.size(); ++i) {
      body += (i > 2 ? " " : "") + words[i];
    }
    body = std::string(text::trim(body));
    if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
      c.op = CompareOp::kInSet;
      c.set = split_unquoted_commas(std::string_view(body).substr(1, body.size() - 2));
      if (c.set.empty()) {
        throw ConfigError("empty set in condition on '" + c.feature + "'");
      }
      return c;
    }
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') {
      const auto bounds = split_unquoted_commas(std::string_view(body).substr(1, body.size() - 2));
      const auto lo = bounds.size() == 2 ? text::parse_double(bounds[0]) : std::nullopt;
      const auto hi = bounds.size() == 2 ? text::parse_double(bounds[1]) : std::nullopt;
      if (!lo || !hi || *lo > *hi) {
        throw ConfigError("bad interval '" + body + "' in condition on '" + c.feature + "'");
      }
      c.op = CompareOp::kInInterval;
      c.lo = *lo;
      c.hi = *hi;
      return c;
    }
    throw ConfigError("expected {set} or [lo,hi] after 'in', got '" + body + "'");
  }
  if (words.size() != 3) {
    throw ConfigError("trailing words in condition on '" + c.feature + "'");
  }
  if (op == "=" || op == "==") {
    c.op = CompareOp::kEq;
  } else if (op == "!=") {
    c.op = CompareOp::kNe;
  } else if (op == "<") {
    c.op = CompareOp::kLt;
  } else if (op == "<=") {
    c.op = CompareOp::kLe;
  } else if (op == ">") {
    c.op = CompareOp::kGt;
  } else if (op == ">=") {
    c.op = CompareOp::kGe;
  } else {
    throw ConfigError("unknown operator '" + op + "'");
  }
  c.value = text::unquote(words[2]);
  if (c.op != CompareOp::kEq && c.op != CompareOp::kNe && !text::parse_double(c.value)) {
    throw ConfigError("ordering comparison on '" + c.feature + "' needs a number, got '" +
                      c.value + "'");
  }
  return c;
}

}  // namespace

bool Condition::matches(std::string_view cell) const
{
  switch (op) {
    case CompareOp::kEq:
    case CompareOp::kNe: {
      const auto a = text::parse_double(cell);
      const auto b = text::parse_double(value);
      const bool equal = (a && b) ? *a == *b : cell == value;
      return op == CompareOp::kEq ? equal : !equal;
    }
    case CompareOp::kInSet:
      return std::find(set.begin(), set.end(), cell) != set.end();
    default:
      break;
  }
  const auto x = text::parse_double(cell);
  if (!x) {
    return false;
  }
  if (op == CompareOp::kInInterval) {
    return lo <= *x && *x <= hi;
  }
  const double v = *text::parse_double(value);
  switch (op) {
    case CompareOp::kLt:
      return *x < v;
    case CompareOp::kLe:
      return *x <= v;
    case CompareOp::kGt:
      return *x > v;
    case CompareOp::kGe:
      return *x >= v;
    default:
      return false;
  }
}

std::string Condition::to_string() const
{
  const std::string name = text::quote_if_needed(feature);
  switch (op) {
    case CompareOp::kEq:
      return name + " = " + text::quote_if_needed(value);
    case CompareOp::kNe:
      return name + " != " + text::quote_if_needed(value);
    case CompareOp::kLt:
      return name + " < " + value;
    case CompareOp::kLe:
      return name + " <= " + value;
    case CompareOp::kGt:
      return name + " > " + value;
    case CompareOp::kGe:
      return name + " >= " + value;
    case CompareOp::kInSet: {
      std::vector<std::string> quoted;
      for (const auto& s : set) {
        quoted.push_back(text::quote_if_needed(s));
      }
      return name + " in {" + text::join(quoted, ",") + "}";
    }
    case CompareOp::kInInterval:
      return name + " in [" + text::format_double(lo) + "," + text::format_double(hi) + "]";
  }
  return name;
}

std::vector<Condition> parse_conditions(std::span<const std::string> words)
{
  std::vector<Condition> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= words.size(); ++i) {
    if (i == words.size() || words[i] == "and") {
      if (i == start) {
        throw ConfigError("empty condition");
      }
      out.push_back(parse_one(words.subspan(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace lam
