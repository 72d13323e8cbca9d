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

// Preprocessing recipes: a plain-text, line-oriented description of how a
// raw CSV becomes an audit table. See docs/recipe-format.md for the grammar.

#ifndef LAM_RECIPE_HPP_
#define LAM_RECIPE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lam/csv.hpp"
#include "lam/data_table.hpp"
#include "lam/predicate.hpp"

namespace lam
{

/// Inclusive numeric range mapped to one label. Either bound may be
/// infinite.
struct BinSpec
{
  std::string label;
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const BinSpec&) const = default;
};

enum class StepKind
{
  kCopy,
  kBin,
  kMap,
  kOutcome,
};

struct RecipeStep
{
  StepKind kind = StepKind::kCopy;
  std::string source;
  std::string target;
  FeatureRole role = FeatureRole::kInput;
  std::vector<BinSpec> bins;
  std::vector<std::pair<std::string, std::string>> mapping;
  std::optional<std::string> fallback;  ///< `*=label` catch-all for kMap

  bool operator==(const RecipeStep&) const = default;
};

struct RecipeSpec
{
  std::string name;
  std::vector<Feature> inputs;
  std::vector<Condition> filters;
  std::vector<RecipeStep> steps;
  OutputSpace output_space;
  std::string favorable;
  std::vector<ProtectedAttribute> protected_attributes;
  /// Column holding the audited system's label g(x), when the dataset has one.
  std::optional<std::string> system_column;

  /// Schema used to read the raw CSV.
  Schema raw_schema() const;

  bool operator==(const RecipeSpec&) const = default;
};

/// Throws ConfigError with the offending line number on malformed text.
RecipeSpec parse_recipe(std::string_view text);
RecipeSpec load_recipe(const std::filesystem::path& path);
std::string to_text(const RecipeSpec& recipe);

/// compas-binary, compas-decile, german, adult.
std::vector<std::string> builtin_recipe_names();
/// Throws ConfigError for an unknown name.
RecipeSpec builtin_recipe(std::string_view name);

/// Keeps rows satisfying every condition. Row ids are preserved.
DataTable filter_rows(const DataTable& table, const std::vector<Condition>& conditions);

/// Bins, maps and relabels columns. Row count and ids are preserved.
/// Throws ConfigError when the recipe references a missing column, and
/// DataError on a value outside every bin or an unmapped level.
DataTable apply_recipe(const DataTable& table, const RecipeSpec& recipe);

struct PreparedDataset
{
  DataTable table;
  std::vector<RejectedRow> rejected;
  RecipeSpec recipe;
};

/// load_csv with the recipe's raw schema, then filter_rows, then apply_recipe.
PreparedDataset load_dataset(const std::filesystem::path& csv, const RecipeSpec& recipe);

}  // namespace lam

#endif  // LAM_RECIPE_HPP_
