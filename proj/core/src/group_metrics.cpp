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

#include "lam/group_metrics.hpp"

#include <cmath>
#include <sstream>

#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{
namespace
{

void check_aligned(std::span<const std::string> labels, const DataTable& table, const char* what)
{
  if (labels.size() != table.rows()) {
    throw ConfigError(std::string(what) + " has " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(table.rows()) + " rows");
  }
}

FairnessReport make_report(Notion notion, const GroupPair& pair, GroupRates a, GroupRates b,
                           ConditionalRate GroupRates::*rate)
{
  FairnessReport report;
  report.notion = notion;
  report.pair = pair;
  const auto va = (a.*rate).value();
  const auto vb = (b.*rate).value();
  if (va && vb) {
    report.difference = *va - *vb;
  }
  report.satisfied = satisfies(report.difference, pair.delta);
  report.group_rates = std::move(a);
  report.reference_rates = std::move(b);
  return report;
}

}  // namespace

std::string_view to_string(Notion notion)
{
  switch (notion) {
    case Notion::kStatisticalParity:
      return "statistical-parity";
    case Notion::kEqualOpportunity:
      return "equal-opportunity";
    case Notion::kCalibration:
      return "calibration";
  }
  return "?";
}

Notion parse_notion(std::string_view text)
{
  for (const auto n : kAllNotions) {
    if (to_string(n) == text) {
      return n;
    }
  }
  throw ConfigError("unknown fairness notion '" + std::string(text) + "'");
}

std::string FairnessReport::record_header()
{
  return "notion\tattribute\tgroup\treference\tdifference\texact\tdelta\tsatisfied";
}

std::string FairnessReport::to_record() const
{
  std::ostringstream out;
  out << to_string(notion) << '\t' << pair.attribute << '\t' << pair.group << '\t'
      << pair.reference << '\t';
  if (difference) {
    out << text::format_double(difference->to_double()) << '\t' << difference->to_string();
  } else {
    out << "undefined\tundefined";
  }
  out << '\t' << text::format_double(pair.delta) << '\t' << (satisfied ? "yes" : "no");
  return out.str();
}

bool satisfies(const std::optional<Rational>& difference, double delta)
{
  return difference.has_value() && std::fabs(difference->to_double()) <= delta;
}

GroupRates compute_group_rates(std::span<const std::string> predictions,
                               std::span<const std::string> truths, const DataTable& table,
                               std::string_view attribute, std::string_view group,
                               std::string_view favorable)
{
  check_aligned(predictions, table, "predictions");
  if (!truths.empty()) {
    check_aligned(truths, table, "truths");
  }
  const auto& values = table.column(attribute);
  GroupRates rates;
  rates.group = std::string(group);
  for (std::size_t r = 0; r < table.rows(); ++r) {
    if (values[r] != group) {
      continue;
    }
    ++rates.count;
    const bool pred_fav = predictions[r] == favorable;
    ++rates.positive_rate.total;
    rates.positive_rate.hits += pred_fav ? 1 : 0;
    if (truths.empty()) {
      continue;
    }
    const bool true_fav = truths[r] == favorable;
    if (true_fav) {
      ++rates.true_positive_rate.total;
      rates.true_positive_rate.hits += pred_fav ? 1 : 0;
    }
    if (pred_fav) {
      ++rates.positive_predictive_value.total;
      rates.positive_predictive_value.hits += true_fav ? 1 : 0;
    }
  }
  return rates;
}

FairnessReport statistical_parity_diff(std::span<const std::string> predictions,
                                       const DataTable& table, const GroupPair& pair)
{
  return make_report(
      Notion::kStatisticalParity, pair,
      compute_group_rates(predictions, {}, table, pair.attribute, pair.group, pair.favorable),
      compute_group_rates(predictions, {}, table, pair.attribute, pair.reference, pair.favorable),
      &GroupRates::positive_rate);
}

FairnessReport equal_opportunity_diff(std::span<const std::string> predictions,
                                      std::span<const std::string> truths, const DataTable& table,
                                      const GroupPair& pair)
{
  check_aligned(truths, table, "truths");
  return make_report(
      Notion::kEqualOpportunity, pair,
      compute_group_rates(predictions, truths, table, pair.attribute, pair.group, pair.favorable),
      compute_group_rates(predictions, truths, table, pair.attribute, pair.reference,
                          pair.favorable),
      &GroupRates::true_positive_rate);
}

FairnessReport calibration_diff(std::span<const std::string> predictions,
                                std::span<const std::string> truths, const DataTable& table,
                                const GroupPair& pair)
{
  check_aligned(truths, table, "truths");
  return make_report(
      Notion::kCalibration, pair,
      compute_group_rates(predictions, truths, table, pair.attribute, pair.group, pair.favorable),
      compute_group_rates(predictions, truths, table, pair.attribute, pair.reference,
                          pair.favorable),
      &GroupRates::positive_predictive_value);
}

FairnessReport fairness_diff(Notion notion, std::span<const std::string> predictions,
                             std::span<const std::string> truths, const DataTable& table,
                             const GroupPair& pair)
{
  switch (notion) {
    case Notion::kStatisticalParity:
      return statistical_parity_diff(predictions, table, pair);
    case Notion::kEqualOpportunity:
      return equal_opportunity_diff(predictions, truths, table, pair);
    case Notion::kCalibration:
      return calibration_diff(predictions, truths, table, pair);
  }
  throw ConfigError("unknown notion");
}

std::vector<SatisfactionPoint> sweep_delta(std::span<const FairnessReport> reports,
                                           std::span<const double> delta_grid)
{
  if (delta_grid.empty()) {
    throw ConfigError("delta grid is empty");
  }
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] >= 0.0)) {
      throw ConfigError("delta grid values must be nonnegative");
    }
    if (i > 0 && delta_grid[i] < delta_grid[i - 1]) {
      throw ConfigError("delta grid must be sorted ascending");
    }
  }
  std::vector<SatisfactionPoint> curve;
  curve.reserve(delta_grid.size());
  for (const double delta : delta_grid) {
    SatisfactionPoint point;
    point.delta = delta;
    point.total = reports.size();
    for (const auto& r : reports) {
      point.satisfied += satisfies(r.difference, delta) ? 1 : 0;
    }
    point.fraction = point.total == 0 ? 0.0
                                      : static_cast<double>(point.satisfied) /
                                            static_cast<double>(point.total);
    curve.push_back(point);
  }
  return curve;
}

std::vector<double> delta_grid(double lo, double hi, double step)
{
  if (!(step > 0.0) || !(hi >= lo) || lo < 0.0) {
    throw ConfigError("delta grid needs 0 <= lo <= hi and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  for (std::size_t i = 0; i <= n; ++i) {
    grid.push_back(lo + static_cast<double>(i) * step);
  }
  return grid;
}

}  // namespace lam
