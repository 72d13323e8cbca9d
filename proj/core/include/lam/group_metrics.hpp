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

// Coarse group-fairness differences between two values of one protected
// attribute. Every difference is the signed value for `group` minus
// `reference`; by convention the caller puts the unprivileged group first so
// that a positive value means the unprivileged group is favored.
//
// Probabilities are exact rationals. A conditional whose denominator is zero
// makes the report undefined instead of silently becoming 0.

#ifndef LAM_GROUP_METRICS_HPP_
#define LAM_GROUP_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/rational.hpp"

namespace lam
{

enum class Notion
{
  kStatisticalParity,
  kEqualOpportunity,
  kCalibration,
};

std::string_view to_string(Notion notion);
Notion parse_notion(std::string_view text);
inline constexpr Notion kAllNotions[] = {Notion::kStatisticalParity, Notion::kEqualOpportunity,
                                         Notion::kCalibration};

/// hits / total, undefined when total is zero.
struct ConditionalRate
{
  std::int64_t hits = 0;
  std::int64_t total = 0;

  std::optional<Rational> value() const
  {
    if (total == 0) {
      return std::nullopt;
    }
    return Rational(hits, total);
  }
};

struct GroupRates
{
  std::string group;
  std::int64_t count = 0;
  ConditionalRate positive_rate;              ///< P[pred = fav | A = a]
  ConditionalRate true_positive_rate;         ///< P[pred = fav | y = fav, A = a]
  ConditionalRate positive_predictive_value;  ///< P[y = fav | pred = fav, A = a]
};

/// Which two groups of which attribute to compare, and against what label.
struct GroupPair
{
  std::string attribute;
  std::string group;      ///< a (unprivileged by convention)
  std::string reference;  ///< a' (privileged by convention)
  std::string favorable;
  double delta = 0.0;
};

struct FairnessReport
{
  Notion notion = Notion::kStatisticalParity;
  GroupPair pair;
  std::optional<Rational> difference;
  bool satisfied = false;  ///< |difference| <= delta and defined
  GroupRates group_rates;
  GroupRates reference_rates;

  bool undefined() const { return !difference.has_value(); }
  double value() const { return difference ? difference->to_double() : 0.0; }

  /// Tab-separated record: notion, attribute, group, reference, difference
  /// (or "undefined"), exact fraction, delta, satisfied.
  std::string to_record() const;
  static std::string record_header();
};

/// Counts for one group. `truths` may be empty when only the positive rate
/// is needed.
GroupRates compute_group_rates(std::span<const std::string> predictions,
                               std::span<const std::string> truths, const DataTable& table,
                               std::string_view attribute, std::string_view group,
                               std::string_view favorable);

FairnessReport statistical_parity_diff(std::span<const std::string> predictions,
                                       const DataTable& table, const GroupPair& pair);
FairnessReport equal_opportunity_diff(std::span<const std::string> predictions,
                                      std::span<const std::string> truths, const DataTable& table,
                                      const GroupPair& pair);
FairnessReport calibration_diff(std::span<const std::string> predictions,
                                std::span<const std::string> truths, const DataTable& table,
                                const GroupPair& pair);
FairnessReport fairness_diff(Notion notion, std::span<const std::string> predictions,
                             std::span<const std::string> truths, const DataTable& table,
                             const GroupPair& pair);

/// |difference| <= delta for a defined difference. Comparison happens on the
/// correctly rounded double of the exact fraction.
bool satisfies(const std::optional<Rational>& difference, double delta);

struct SatisfactionPoint
{
  double delta = 0.0;
  std::size_t satisfied = 0;
  std::size_t total = 0;
  double fraction = 0.0;
};

/// Fraction of reports (one per auditor or dataset) whose difference is
/// within each delta. Undefined reports count as unsatisfied. Throws
/// ConfigError on an empty, unsorted or negative grid.
std::vector<SatisfactionPoint> sweep_delta(std::span<const FairnessReport> reports,
                                           std::span<const double> delta_grid);

/// Inclusive grid lo, lo+step, ..., hi computed by index to avoid drift.
std::vector<double> delta_grid(double lo, double hi, double step);

}  // namespace lam

#endif  // LAM_GROUP_METRICS_HPP_
