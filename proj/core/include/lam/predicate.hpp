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

// Atomic predicates over one named feature. Shared by recipe row filters and
// assessment rules.
//
//   feature = value      feature != value
//   feature < value      feature <= value     feature > value    feature >= value
//   feature in {a, b, "c d"}                   (string membership)
//   feature in [lo, hi]                        (inclusive numeric interval)
//
// Equality compares numerically when both sides parse as numbers, as
// strings otherwise. Ordering and interval tests are false for values that
// are not numbers.

#ifndef LAM_PREDICATE_HPP_
#define LAM_PREDICATE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"

namespace lam
{

enum class CompareOp
{
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kInSet,
  kInInterval,
};

struct Condition
{
  std::string feature;
  CompareOp op = CompareOp::kEq;
  std::string value;               ///< comparison operand
  std::vector<std::string> set;    ///< kInSet members
  double lo = 0.0;                 ///< kInInterval bounds, inclusive
  double hi = 0.0;

  bool matches(std::string_view cell) const;
  bool matches(const RowView& row) const { return matches(row.value(feature)); }
  std::string to_string() const;

  bool operator==(const Condition&) const = default;
};

/// Parses `words` (as produced by text::tokenize) as conjunctions joined by
/// the word `and`. Throws ConfigError on malformed input.
std::vector<Condition> parse_conditions(std::span<const std::string> words);

}  // namespace lam

#endif  // LAM_PREDICATE_HPP_
