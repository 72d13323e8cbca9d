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

// The latent assessment model: an auditor holds an intrinsic labelling f,
// compares it with the system output g(x) and reports s = 1 ("unfair")
// exactly when d(g(x), f(x)) >= epsilon.

#ifndef LAM_LAM_HPP_
#define LAM_LAM_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/group_metrics.hpp"
#include "lam/output_metric.hpp"
#include "lam/rule.hpp"
#include "lam/schema.hpp"

namespace lam
{

/// One verdict. Real auditors leave intrinsic_label and distance empty.
struct Judgment
{
  RowId row = 0;
  std::string system_label;
  std::optional<std::string> intrinsic_label;
  std::optional<double> distance;
  int s = 0;
  double epsilon = 0.0;

  bool operator==(const Judgment&) const = default;
};

/// s = 1 when d(system, intrinsic) >= epsilon. Throws ConfigError for a
/// non-positive epsilon or a label outside `space` (an empty space accepts
/// any label).
Judgment judge(std::string_view system_label, std::string_view intrinsic_label, double epsilon,
               OutputMetric metric, const OutputSpace& space = {});

/// Applies the rule to every row and judges it against the aligned system
/// labels. Judgments come back in table order.
std::vector<Judgment> simulate_judgments(const AssessmentRule& rule, const DataTable& table,
                                         std::span<const std::string> system_labels,
                                         double epsilon, OutputMetric metric);

struct LamEstimate
{
  double epsilon_hat = 0.0;             ///< max distance over the rows
  std::vector<double> distances;        ///< per row, table order
  std::map<double, std::size_t> histogram;  ///< distance -> row count

  /// The system is an epsilon-LAM of the rule iff every distance is
  /// strictly below epsilon.
  bool is_epsilon_lam(double epsilon) const { return epsilon > epsilon_hat; }
};

/// Throws DataError on an empty table, ConfigError on misaligned labels.
LamEstimate estimate_epsilon(std::span<const std::string> system_labels,
                             const AssessmentRule& rule, const DataTable& table,
                             OutputMetric metric);
LamEstimate estimate_epsilon(std::span<const std::string> system_labels,
                             std::span<const std::string> intrinsic_labels, OutputMetric metric);

struct BoundResult
{
  std::string notion;
  double epsilon = 0.0;
  double delta = 0.0;
  double kappa = 0.0;
  double lipschitz = 0.0;  ///< M, for the group bounds
  double value = 0.0;      ///< transferred delta
  /// Set when an unfairness bound is <= 0 and so carries no conclusion.
  bool degenerate = false;
};

// The three transfers. Negative parameters throw ConfigError.

/// f (kappa, delta)-individually fair implies g (kappa, 2 eps + delta)-fair.
BoundResult bound_individual_fair(double epsilon, double kappa, double delta);
/// f not (kappa, delta)-fair implies g not (kappa, delta - 2 eps)-fair.
BoundResult bound_individual_unfair(double epsilon, double kappa, double delta);
/// f delta-fair under `notion` implies g (2 M eps + delta)-fair.
BoundResult bound_group(double epsilon, double delta, double lipschitz, Notion notion);

/// Empirical M for a pair of labelings: the largest shift of a group's
/// notion rate between f and g, divided by the largest pointwise output
/// distance. Zero when f and g agree everywhere. Throws DataError when a
/// rate is undefined for either labeling.
double estimate_lipschitz(Notion notion, std::span<const std::string> system_labels,
                          std::span<const std::string> intrinsic_labels,
                          std::span<const std::string> truths, const DataTable& table,
                          const GroupPair& pair, OutputMetric metric);

}  // namespace lam

#endif  // LAM_LAM_HPP_
