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

// Assessment rules: the intrinsic relation f an auditor applies to a row.
//
//   rule f1
//   output 0 1
//   when priors_count in [1,3] and c_charge_degree = F => 1
//   default 0
//
// Clauses are tried in order and the first match wins; the default is
// mandatory, so every row receives a label. See docs/rule-format.md.

#ifndef LAM_RULE_HPP_
#define LAM_RULE_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/predicate.hpp"
#include "lam/schema.hpp"

namespace lam
{

struct RuleClause
{
  std::vector<Condition> conditions;
  std::string label;

  bool operator==(const RuleClause&) const = default;
};

struct AssessmentRule
{
  std::string name;
  OutputSpace output_space;
  std::vector<RuleClause> clauses;
  std::string default_label;

  /// Features named by any clause, in first-mention order.
  std::vector<std::string> referenced_features() const;

  bool operator==(const AssessmentRule&) const = default;
};

/// Throws ConfigError with the offending line number. Clause and default
/// labels must belong to the output space.
AssessmentRule parse_rule(std::string_view text);
AssessmentRule load_rule(const std::filesystem::path& path);
std::string to_text(const AssessmentRule& rule);

/// f1, f1-decile, f2, f3.
std::vector<std::string> builtin_rule_names();
/// Throws ConfigError for an unknown name.
AssessmentRule builtin_rule(std::string_view name);

/// Label of the first matching clause, else the default. Throws
/// ConfigError when the row lacks a referenced feature.
const std::string& evaluate_rule(const AssessmentRule& rule, const RowView& row);
/// One label per table row.
std::vector<std::string> evaluate_rule(const AssessmentRule& rule, const DataTable& table);

}  // namespace lam

#endif  // LAM_RULE_HPP_
