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


#include <gtest/gtest.h>

#include <cmath>

#include "lam/encoding.hpp"
#include "lam/error.hpp"
#include "lam/lam.hpp"
#include "lam/recipe.hpp"
#include "lam/rule.hpp"
#include "lam/similarity.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

namespace lam
{
namespace
{

using test::closeness_components;

DataTable rule_row(const std::vector<std::pair<std::string, std::string>>& values)
{
  std::vector<std::pair<std::string, std::vector<std::string>>> cols;
  for (const auto& [k, v] : values) {
    cols.push_back({k, {v}});
  }
  return test::make_table(cols);
}

TEST(Rule, F1MediumPriorsFelonyIsOne)
{
  const auto t = rule_row({{"priors_count", "2"}, {"c_charge_degree", "F"}});
  EXPECT_EQ(evaluate_rule(builtin_rule("f1"), t.row(0)), "1");
  const auto m = rule_row({{"priors_count", "2"}, {"c_charge_degree", "M"}});
  EXPECT_EQ(evaluate_rule(builtin_rule("f1"), m.row(0)), "0");
}

TEST(Rule, F2SavingsPaidEmployedIsOne)
{
  const auto t = rule_row({{"savings", "500-1000"}, {"credit_history", "Paid"}, {"employment", "1-4"}});
  EXPECT_EQ(evaluate_rule(builtin_rule("f2"), t.row(0)), "1");
  const auto u = rule_row({{"savings", "<100"}, {"credit_history", "Paid"}, {"employment", "1-4"}});
  EXPECT_EQ(evaluate_rule(builtin_rule("f2"), u.row(0)), "2");
}

TEST(Rule, F3HighSchoolIsZero)
{
  EXPECT_EQ(evaluate_rule(builtin_rule("f3"), rule_row({{"education", "HS-grad"}}).row(0)), "0");
  EXPECT_EQ(evaluate_rule(builtin_rule("f3"), rule_row({{"education", "Masters"}}).row(0)), "1");
}

TEST(Rule, ParseAndPrintRoundTrip)
{
  for (const auto& name : builtin_rule_names()) {
    const auto rule = builtin_rule(name);
    EXPECT_EQ(parse_rule(to_text(rule)), rule) << name;
  }
}

TEST(Rule, MalformedRulesAreConfigErrors)
{
  EXPECT_THROW(parse_rule("rule r\noutput 0 1\nwhen x = 1 => 1\n"), ConfigError);  // no default
  EXPECT_THROW(parse_rule("rule r\noutput 0 1\ndefault 0\nwhen x = 1 => 1\n"), ConfigError);
  EXPECT_THROW(parse_rule("rule r\noutput 0 1\ndefault 0\ndefault 1\n"), ConfigError);
  EXPECT_THROW(parse_rule("rule r\noutput 0 1\nwhen x = 1 => 7\ndefault 0\n"), ConfigError);
}

TEST(Rule, MissingFeatureIsAConfigError)
{
  EXPECT_THROW(evaluate_rule(builtin_rule("f1"), rule_row({{"age", "3"}})), ConfigError);
}

TEST(Judge, BelowThresholdIsFair)
{
  const auto j = judge("0.3", "0", 0.5, OutputMetric::kAbsolute);
  EXPECT_EQ(j.s, 0);
  EXPECT_NEAR(*j.distance, 0.3, 1e-15);
}

TEST(Judge, EqualLabelsAreFairForAnyEpsilon)
{
  for (const double eps : {1e-9, 0.5, 1.0, 7.0}) {
    EXPECT_EQ(judge("4", "4", eps, OutputMetric::kAbsolute).s, 0);
    EXPECT_EQ(judge("x", "x", eps, OutputMetric::kDiscrete).s, 0);
  }
}

TEST(Judge, DecileGapAtOrAboveEpsilonIsUnfair)
{
  EXPECT_EQ(judge("2", "9", 5.0, OutputMetric::kAbsolute).s, 1);
  EXPECT_EQ(judge("2", "7", 5.0, OutputMetric::kAbsolute).s, 1);  // d = eps
  EXPECT_EQ(judge("2", "6", 5.0, OutputMetric::kAbsolute).s, 0);
}

TEST(Judge, RejectsBadEpsilonAndForeignLabels)
{
  EXPECT_THROW(judge("1", "0", 0.0, OutputMetric::kDiscrete), ConfigError);
  EXPECT_THROW(judge("1", "0", -1.0, OutputMetric::kDiscrete), ConfigError);
  EXPECT_THROW(judge("1", "5", 1.0, OutputMetric::kDiscrete, OutputSpace({"0", "1"})), ConfigError);
}

TEST(Estimate, AgreementGivesZero)
{
  const std::vector<std::string> labels{"1", "0", "1"};
  const auto e = estimate_epsilon(labels, labels, OutputMetric::kDiscrete);
  EXPECT_EQ(e.epsilon_hat, 0.0);
  EXPECT_TRUE(e.is_epsilon_lam(1e-12));
  EXPECT_FALSE(e.is_epsilon_lam(0.0));
}

TEST(Estimate, OneDisagreementGivesOne)
{
  const std::vector<std::string> g{"1", "0", "1"};
  const std::vector<std::string> f{"1", "1", "1"};
  const auto e = estimate_epsilon(g, f, OutputMetric::kDiscrete);
  EXPECT_EQ(e.epsilon_hat, 1.0);
  EXPECT_EQ(e.histogram.at(0.0), 2u);
  EXPECT_EQ(e.histogram.at(1.0), 1u);
}

TEST(Estimate, EmptyInputIsADataError)
{
  const std::vector<std::string> none;
  EXPECT_THROW(estimate_epsilon(none, none, OutputMetric::kDiscrete), DataError);
}

// The maximum is recomputed here row by row.
TEST(Estimate, CompasDecileAgainstRuleIsTheRowMaximum)
{
  const auto d = load_dataset(test::data_path("compas.csv"), builtin_recipe("compas-decile"));
  const auto rule = builtin_rule("f1-decile");
  const auto& scores = d.table.column("decile_score");
  double max = 0.0;
  for (std::size_t r = 0; r < d.table.rows(); ++r) {
    max = std::max(max, std::fabs(std::stod(scores[r]) -
                                  std::stod(evaluate_rule(rule, d.table.row(r)))));
  }
  const auto e = estimate_epsilon(scores, rule, d.table, OutputMetric::kAbsolute);
  EXPECT_EQ(e.epsilon_hat, max);
  EXPECT_FALSE(e.is_epsilon_lam(e.epsilon_hat));
  EXPECT_TRUE(e.is_epsilon_lam(std::nextafter(e.epsilon_hat, 100.0)));
}

TEST(Simulate, DiscreteVerdictsMarkDisagreements)
{
  const auto d = load_dataset(test::data_path("compas.csv"), builtin_recipe("compas-binary"));
  const auto rule = builtin_rule("f1");
  const auto& recid = d.table.column("two_year_recid");
  const auto js = simulate_judgments(rule, d.table, recid, 1.0, OutputMetric::kDiscrete);
  ASSERT_EQ(js.size(), d.table.rows());
  for (std::size_t r = 0; r < js.size(); ++r) {
    EXPECT_EQ(js[r].s, recid[r] != evaluate_rule(rule, d.table.row(r)) ? 1 : 0);
    EXPECT_EQ(js[r].row, d.table.id(r));
  }
  const auto own = evaluate_rule(rule, d.table);
  for (const auto& j : simulate_judgments(rule, d.table, own, 1.0, OutputMetric::kDiscrete)) {
    EXPECT_EQ(j.s, 0);
  }
}

TEST(Bounds, HandSubstitution)
{
  EXPECT_DOUBLE_EQ(bound_individual_fair(0.1, 1.0, 0.05).value, 2 * 0.1 + 0.05);
  EXPECT_EQ(bound_individual_fair(0.0, 1.0, 0.05).value, 0.05);
  EXPECT_DOUBLE_EQ(bound_individual_unfair(0.1, 0.0, 0.5).value, 0.5 - 2 * 0.1);
  const auto degenerate = bound_individual_unfair(0.1, 0.0, 0.1);
  EXPECT_DOUBLE_EQ(degenerate.value, 0.1 - 2 * 0.1);
  EXPECT_TRUE(degenerate.degenerate);
  EXPECT_EQ(bound_individual_unfair(0.0, 0.0, 0.3).value, 0.3);
  EXPECT_DOUBLE_EQ(bound_group(0.1, 0.05, 1.0, Notion::kStatisticalParity).value, 2 * 1.0 * 0.1 + 0.05);
  EXPECT_EQ(bound_group(0.3, 0.05, 0.0, Notion::kCalibration).value, 0.05);
  EXPECT_EQ(bound_group(0.25, 0.0, 2.0, Notion::kEqualOpportunity).value, 1.0);
  EXPECT_THROW(bound_group(-0.1, 0.0, 1.0, Notion::kCalibration), ConfigError);
  EXPECT_THROW(bound_individual_fair(0.1, -1.0, 0.0), ConfigError);
}

TEST(BoundsProperty, MonotoneAndAboveDelta)
{
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const double e = rng.uniform(0, 2);
    const double d = rng.uniform(0, 2);
    const double m = rng.uniform(0, 3);
    const double k = rng.uniform(0, 2);
    const double h = rng.uniform(0, 1);
    EXPECT_GE(bound_individual_fair(e, k, d).value, d);
    EXPECT_LE(bound_individual_fair(e, k, d).value, bound_individual_fair(e + h, k, d).value);
    EXPECT_LE(bound_individual_fair(e, k, d).value, bound_individual_fair(e, k, d + h).value);
    for (const auto n : kAllNotions) {
      EXPECT_EQ(bound_group(e, d, m, n).value, 2.0 * m * e + d);
      EXPECT_LE(bound_group(e, d, m, n).value, bound_group(e + h, d, m, n).value);
      EXPECT_LE(bound_group(e, d, m, n).value, bound_group(e, d + h, m, n).value);
      EXPECT_LE(bound_group(e, d, m, n).value, bound_group(e, d, m + h, n).value);
    }
  }
}

// f is (kappa, delta)-fair by construction (one base label per closeness
// component plus noise of at most delta); g stays strictly within epsilon
// of f. Then g must pass the check at (kappa, 2 epsilon + delta).
TEST(TransferProperty, IndividualFairness)
{
  Rng rng(101);
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 2 + rng.index(40);
    const auto table = one_hot_encode(
        test::make_table({{"u", test::random_labels(rng, n, {"a", "b", "c", "d"})},
                          {"v", test::random_labels(rng, n, {"x", "y", "z"})}}));
    const auto model = fit_covariance(table);
    const double kappa = std::vector<double>{0.0, 0.5, 1.5, 3.0}[rng.index(4)];
    const auto delta = static_cast<int>(rng.index(3));
    const auto epsilon = static_cast<int>(1 + rng.index(3));
    const auto comp = closeness_components(table, model, kappa);
    std::vector<int> base(n);
    for (auto& b : base) {
      b = static_cast<int>(rng.index(40));
    }
    std::vector<std::string> f(n);
    std::vector<std::string> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int fv = base[comp[i]] + static_cast<int>(rng.index(static_cast<std::uint64_t>(delta) + 1)) -
                     delta / 2;
      const int shift = static_cast<int>(rng.index(static_cast<std::uint64_t>(2 * epsilon - 1))) -
                        (epsilon - 1);
      f[i] = std::to_string(fv);
      g[i] = std::to_string(fv + shift);
    }
    ASSERT_TRUE(individual_fairness_check(f, table, model, kappa, delta, OutputMetric::kAbsolute).fair());
    ASSERT_TRUE(estimate_epsilon(g, f, OutputMetric::kAbsolute).is_epsilon_lam(epsilon));
    const auto bound = bound_individual_fair(epsilon, kappa, delta);
    const auto r = individual_fairness_check(g, table, model, kappa, bound.value, OutputMetric::kAbsolute);
    failures += r.fair() ? 0 : 1;
  }
  EXPECT_EQ(failures, 0u);
}

// For each notion: f within delta (strictly), g epsilon-LAM of f, M the
// empirical ratio. Then |diff_g| < 2 M epsilon + delta.
TEST(TransferProperty, GroupNotions)
{
  Rng rng(202);
  std::size_t failures = 0;
  std::size_t instances = 0;
  while (instances < 1000) {
    const bool decile = rng.uniform() < 0.5;
    const auto metric = decile ? OutputMetric::kAbsolute : OutputMetric::kDiscrete;
    const std::vector<std::string> space =
        decile ? std::vector<std::string>{"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"}
               : std::vector<std::string>{"0", "1"};
    const auto n = 4 + rng.index(80);
    const auto attr = test::random_labels(rng, n, {"p", "q"});
    const auto truths = test::random_labels(rng, n, {"0", "1"});
    const auto f = test::random_labels(rng, n, space);
    auto g = f;
    const double flip = rng.uniform();
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform() < flip) {
        g[i] = test::pick(rng, space);
      }
    }
    const auto table = test::make_table({{"a", attr}, {"y", truths}});
    const auto notion = kAllNotions[rng.index(3)];
    const GroupPair pair{"a", "p", "q", "1", 0.0};
    const auto fd = fairness_diff(notion, f, truths, table, pair);
    const auto gd = fairness_diff(notion, g, truths, table, pair);
    if (fd.undefined() || gd.undefined()) {
      continue;
    }
    const double delta = std::fabs(fd.value()) + rng.uniform(1e-6, 0.1);
    const double epsilon = estimate_epsilon(g, f, metric).epsilon_hat + rng.uniform(1e-6, 1.0);
    const double m = estimate_lipschitz(notion, g, f, truths, table, pair, metric);
    const auto bound = bound_group(epsilon, delta, m, notion);
    failures += std::fabs(gd.value()) < bound.value ? 0 : 1;
    ++instances;
  }
  EXPECT_EQ(failures, 0u);
}

TEST(Lipschitz, AgreementGivesZero)
{
  const auto t = test::make_table({{"a", {"p", "q"}}, {"y", {"1", "0"}}});
  const std::vector<std::string> f{"1", "0"};
  EXPECT_EQ(estimate_lipschitz(Notion::kStatisticalParity, f, f, t.column("y"), t,
                               {"a", "p", "q", "1", 0.0}, OutputMetric::kDiscrete),
            0.0);
}

}  // namespace
}  // namespace lam
