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

#include "lam/lam.hpp"

#include <algorithm>
#include <cmath>

#include "lam/error.hpp"

namespace lam
{
namespace
{

void require_nonnegative(double value, const char* name)
{
  if (!(value >= 0.0)) {
    throw ConfigError(std::string(name) + " must be nonnegative");
  }
}

std::optional<Rational> notion_rate(Notion notion, const GroupRates& rates)
{
  switch (notion) {
    case Notion::kStatisticalParity:
      return rates.positive_rate.value();
    case Notion::kEqualOpportunity:
      return rates.true_positive_rate.value();
    case Notion::kCalibration:
      return rates.positive_predictive_value.value();
  }
  return std::nullopt;
}

}  // namespace

Judgment judge(std::string_view system_label, std::string_view intrinsic_label, double epsilon,
               OutputMetric metric, const OutputSpace& space)
{
  if (!(epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive");
  }
  if (!space.empty()) {
    for (const auto label : {system_label, intrinsic_label}) {
      if (!space.contains(label)) {
        throw ConfigError("label '" + std::string(label) + "' is outside the output space");
      }
    }
  }
  Judgment j;
  j.system_label = std::string(system_label);
  j.intrinsic_label = std::string(intrinsic_label);
  j.distance = output_distance(system_label, intrinsic_label, metric);
  j.s = *j.distance >= epsilon ? 1 : 0;
  j.epsilon = epsilon;
  return j;
}

std::vector<Judgment> simulate_judgments(const AssessmentRule& rule, const DataTable& table,
                                         std::span<const std::string> system_labels,
                                         double epsilon, OutputMetric metric)
{
  if (system_labels.size() != table.rows()) {
    throw ConfigError("simulate: " + std::to_string(system_labels.size()) +
                      " system labels for " + std::to_string(table.rows()) + " rows");
  }
  const auto intrinsic = evaluate_rule(rule, table);
  std::vector<Judgment> out;
  out.reserve(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    auto j = judge(system_labels[r], intrinsic[r], epsilon, metric);
    j.row = table.id(r);
    out.push_back(std::move(j));
  }
  return out;
}

LamEstimate estimate_epsilon(std::span<const std::string> system_labels,
                             std::span<const std::string> intrinsic_labels, OutputMetric metric)
{
  if (system_labels.size() != intrinsic_labels.size()) {
    throw ConfigError("estimate_epsilon: label lists differ in length");
  }
  if (system_labels.empty()) {
    throw DataError("estimate_epsilon: no rows");
  }
  LamEstimate estimate;
  estimate.distances.reserve(system_labels.size());
  for (std::size_t i = 0; i < system_labels.size(); ++i) {
    const double d = output_distance(system_labels[i], intrinsic_labels[i], metric);
    estimate.distances.push_back(d);
    ++estimate.histogram[d];
    estimate.epsilon_hat = std::max(estimate.epsilon_hat, d);
  }
  return estimate;
}

LamEstimate estimate_epsilon(std::span<const std::string> system_labels,
                             const AssessmentRule& rule, const DataTable& table,
                             OutputMetric metric)
{
  if (table.empty()) {
    throw DataError("estimate_epsilon: empty table");
  }
  if (system_labels.size() != table.rows()) {
    throw ConfigError("estimate_epsilon: " + std::to_string(system_labels.size()) +
                      " system labels for " + std::to_string(table.rows()) + " rows");
  }
  const auto intrinsic = evaluate_rule(rule, table);
  return estimate_epsilon(system_labels, intrinsic, metric);
}

BoundResult bound_individual_fair(double epsilon, double kappa, double delta)
{
  require_nonnegative(epsilon, "epsilon");
  require_nonnegative(kappa, "kappa");
  require_nonnegative(delta, "delta");
  return {"individual-fairness", epsilon, delta, kappa, 0.0, 2.0 * epsilon + delta, false};
}

BoundResult bound_individual_unfair(double epsilon, double kappa, double delta)
{
  require_nonnegative(epsilon, "epsilon");
  require_nonnegative(kappa, "kappa");
  require_nonnegative(delta, "delta");
  const double value = delta - 2.0 * epsilon;
  return {"individual-unfairness", epsilon, delta, kappa, 0.0, value, value <= 0.0};
}

BoundResult bound_group(double epsilon, double delta, double lipschitz, Notion notion)
{
  require_nonnegative(epsilon, "epsilon");
  require_nonnegative(delta, "delta");
  require_nonnegative(lipschitz, "M");
  return {std::string(to_string(notion)), epsilon,  delta, 0.0, lipschitz,
          2.0 * lipschitz * epsilon + delta, false};
}

double estimate_lipschitz(Notion notion, std::span<const std::string> system_labels,
                          std::span<const std::string> intrinsic_labels,
                          std::span<const std::string> truths, const DataTable& table,
                          const GroupPair& pair, OutputMetric metric)
{
  const auto estimate = estimate_epsilon(system_labels, intrinsic_labels, metric);
  if (estimate.epsilon_hat == 0.0) {
    return 0.0;
  }
  double shift = 0.0;
  for (const auto& group : {pair.group, pair.reference}) {
    const auto g = notion_rate(notion, compute_group_rates(system_labels, truths, table,
                                                           pair.attribute, group, pair.favorable));
    const auto f = notion_rate(notion, compute_group_rates(intrinsic_labels, truths, table,
                                                           pair.attribute, group, pair.favorable));
    if (!g || !f) {
      throw DataError("estimate_lipschitz: " + std::string(to_string(notion)) +
                      " rate undefined for group '" + group + "'");
    }
    shift = std::max(shift, std::fabs((*g - *f).to_double()));
  }
  return shift / estimate.epsilon_hat;
}

}  // namespace lam
