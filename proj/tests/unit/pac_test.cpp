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

#include "lam/error.hpp"
#include "lam/pac.hpp"
#include "lam/random.hpp"

namespace lam
{
namespace
{

TEST(PacComponent, FiniteClassHandValue)
{
  // ceil((ln 2 + ln 2) / 0.5) = ceil(2.7726) = 3
  EXPECT_EQ(pac_component_bound(HypothesisComplexity::finite(2), 0.5, 0.5), 3u);
}

TEST(PacComponent, SingletonClassVanishesAsDeltaNearsOne)
{
  EXPECT_EQ(pac_component_bound(HypothesisComplexity::finite(1), 0.1, 0.999999), 1u);
  EXPECT_LE(pac_component_bound(HypothesisComplexity::finite(1), 0.5, std::nextafter(1.0, 0.0)), 1u);
}

TEST(PacComponent, HalvingEpsilonAtLeastDoubles)
{
  for (const double h : {2.0, 10.0, 1024.0, 1e6}) {
    for (const double eps : {0.4, 0.2, 0.05, 0.01}) {
      const auto c = HypothesisComplexity::finite(h);
      const auto wide = pac_component_bound(c, eps, 0.05);
      const auto narrow = pac_component_bound(c, eps / 2, 0.05);
      EXPECT_GE(narrow + 1, 2 * wide) << h << ' ' << eps;
    }
  }
}

TEST(PacComponent, VcDimensionFormula)
{
  const double eps = 0.1;
  const double delta = 0.05;
  const double d = 5;
  const auto expected =
      static_cast<std::uint64_t>(std::ceil((4.0 / eps) * (d * std::log2(12.0 / eps) + std::log2(2.0 / delta))));
  EXPECT_EQ(pac_component_bound(HypothesisComplexity::vc(d), eps, delta), expected);
}

TEST(PacComponent, RejectsOutOfRangeArguments)
{
  EXPECT_THROW(pac_component_bound(HypothesisComplexity::finite(2), 0.0, 0.5), ConfigError);
  EXPECT_THROW(pac_component_bound(HypothesisComplexity::finite(2), 0.5, 1.0), ConfigError);
  EXPECT_THROW(pac_component_bound(HypothesisComplexity::finite(0.5), 0.5, 0.5), ConfigError);
}

TEST(PacComponentProperty, Monotone)
{
  Rng rng(51);
  for (int trial = 0; trial < 2000; ++trial) {
    const double eps = rng.uniform(0.001, 0.9);
    const double delta = rng.uniform(0.001, 0.9);
    const double h = rng.uniform(1, 1e6);
    const auto c = rng.uniform() < 0.5 ? HypothesisComplexity::finite(h) : HypothesisComplexity::vc(h / 1e4 + 1);
    const auto base = pac_component_bound(c, eps, delta);
    EXPECT_LE(pac_component_bound(c, std::min(0.99, eps * 1.5), delta), base);
    EXPECT_LE(pac_component_bound(c, eps, std::min(0.99, delta * 1.5)), base);
    auto bigger = c;
    bigger.value *= 2;
    EXPECT_GE(pac_component_bound(bigger, eps, delta), base);
  }
}

TEST(PacBudget, ConstantComponentsGiveTheirMaximum)
{
  const auto grid = make_split_grid(0.2, 0.1, 10);
  const auto b = pac_joint_budget(
      0.2, 0.1, [](double, double) { return std::uint64_t{100}; },
      [](double, double) { return std::uint64_t{80}; }, grid);
  EXPECT_EQ(b.n, 100u);
  EXPECT_EQ(b.n_g, 100u);
  EXPECT_EQ(b.n_f, 80u);
  EXPECT_EQ(b.split, grid.front());  // ties keep the earliest split
}

TEST(PacBudget, SymmetricInputsGiveASymmetricSplit)
{
  const auto c = HypothesisComplexity::finite(1000);
  const auto b = pac_joint_budget(0.1, 0.05, c, c, make_split_grid(0.1, 0.05, 12));
  EXPECT_DOUBLE_EQ(b.split.epsilon_g, b.split.epsilon_f);
  EXPECT_DOUBLE_EQ(b.split.delta_g, b.split.delta_f);
}

TEST(PacBudget, SingleFeasibleSplitIsForced)
{
  const PacSplit good{0.03, 0.03, 0.03, 0.01, 0.01, 0.01};
  const PacSplit eps_too_big{0.05, 0.05, 0.05, 0.01, 0.01, 0.01};
  const PacSplit zero_part{0.03, 0.03, 0.0, 0.01, 0.01, 0.01};
  const std::vector<PacSplit> grid{eps_too_big, good, zero_part};
  const auto c = HypothesisComplexity::finite(16);
  const auto b = pac_joint_budget(0.1, 0.05, c, c, grid);
  EXPECT_EQ(b.split, good);
  EXPECT_EQ(b.infeasible, 2u);
  EXPECT_THROW(pac_joint_budget(0.1, 0.05, c, c, std::vector<PacSplit>{eps_too_big}), ConfigError);
  EXPECT_THROW(pac_joint_budget(0.1, 0.05, c, c, std::vector<PacSplit>{}), ConfigError);
}

TEST(PacSplitValidity, EnforcesTheSumConstraints)
{
  EXPECT_TRUE(split_valid({0.03, 0.03, 0.03, 0.5, 0.5, 0.5}, 0.1, 0.05, false));
  EXPECT_FALSE(split_valid({0.03, 0.03, 0.05, 0.5, 0.5, 0.5}, 0.1, 0.05, false));  // eps sum > eps
  EXPECT_TRUE(split_valid({0.03, 0.03, 0.03, 0.9, 0.9, 0.2}, 0.1, 0.05, false));
  EXPECT_FALSE(split_valid({0.03, 0.03, 0.03, 0.9, 0.9, 0.3}, 0.1, 0.05, false));  // > 2 + delta
  EXPECT_FALSE(split_valid({0.03, 0.03, 0.03, 1.0, 0.5, 0.2}, 0.1, 0.05, true));
  EXPECT_FALSE(split_valid({-0.01, 0.03, 0.03, 0.1, 0.1, 0.1}, 0.1, 0.05, false));
}

TEST(PacGrid, EverySplitIsValid)
{
  for (const std::size_t steps : {4u, 7u, 10u, 20u}) {
    const auto grid = make_split_grid(0.3, 0.2, steps);
    EXPECT_FALSE(grid.empty());
    for (const auto& s : grid) {
      EXPECT_TRUE(split_valid(s, 0.3, 0.2, true));
    }
  }
  EXPECT_THROW(make_split_grid(0.1, 0.1, 3), ConfigError);
}

TEST(PacBudgetProperty, NeverBelowItsOwnComponents)
{
  Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = rng.uniform(0.01, 0.5);
    const double delta = rng.uniform(0.01, 0.5);
    const auto g = HypothesisComplexity::finite(rng.uniform(1, 1e5));
    const auto f = HypothesisComplexity::vc(rng.uniform(1, 20));
    const auto b = pac_joint_budget(eps, delta, g, f, make_split_grid(eps, delta, 8));
    EXPECT_GE(b.n, pac_component_bound(g, b.split.epsilon_g, b.split.delta_g));
    EXPECT_GE(b.n, pac_component_bound(f, b.split.epsilon_f, b.split.delta_f));
    EXPECT_EQ(b.n, std::max(b.n_g, b.n_f));
  }
}

TEST(PacBudgetProperty, MonotoneOverAGrid)
{
  const auto c = HypothesisComplexity::finite(4096);
  const auto v = HypothesisComplexity::vc(10);
  std::uint64_t previous_eps = UINT64_MAX;
  for (double eps = 0.02; eps <= 0.5; eps += 0.02) {
    std::uint64_t previous_delta = UINT64_MAX;
    for (double delta = 0.01; delta <= 0.5; delta += 0.01) {
      const auto n = pac_joint_budget(eps, delta, c, v, make_split_grid(eps, delta, 10)).n;
      EXPECT_LE(n, previous_delta) << eps << ' ' << delta;
      previous_delta = n;
    }
    const auto n = pac_joint_budget(eps, 0.05, c, v, make_split_grid(eps, 0.05, 10)).n;
    EXPECT_LE(n, previous_eps) << eps;
    previous_eps = n;
  }
}

}  // namespace
}  // namespace lam
