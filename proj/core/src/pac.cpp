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


#include "lam/pac.hpp"

#include <cmath>

#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{

std::string HypothesisComplexity::to_string() const
{
  return (measure == Measure::kFiniteClass ? "finite:" : "vc:") + text::format_double(value);
}

std::uint64_t pac_component_bound(const HypothesisComplexity& complexity, double epsilon,
                                  double delta)
{
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("PAC bound needs epsilon and delta in (0, 1)");
  }
  if (!(complexity.value >= 1.0) || !std::isfinite(complexity.value)) {
    throw ConfigError("hypothesis complexity must be at least 1");
  }
  double raw = 0.0;
  if (complexity.measure == HypothesisComplexity::Measure::kFiniteClass) {
    raw = (std::log(complexity.value) + std::log(1.0 / delta)) / epsilon;
  } else {
    raw = (4.0 / epsilon) *
          (complexity.value * std::log2(12.0 / epsilon) + std::log2(2.0 / delta));
  }
  return static_cast<std::uint64_t>(std::ceil(raw));
}

bool split_valid(const PacSplit& s, double epsilon, double delta, bool unit_components)
{
  const double parts[] = {s.epsilon_g, s.epsilon_f, s.epsilon_ncf,
                          s.delta_g,   s.delta_f,   s.delta_ncf};
  for (const double p : parts) {
    if (!(p > 0.0) || (unit_components && !(p < 1.0))) {
      return false;
    }
  }
  return s.epsilon_g + s.epsilon_f + s.epsilon_ncf < epsilon &&
         s.delta_g + s.delta_f + s.delta_ncf < 2.0 + delta;
}

namespace
{

PacBudget search(double epsilon, double delta, const ComponentBound& bound_g,
                 const ComponentBound& bound_f, std::span<const PacSplit> grid, bool unit)
{
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw ConfigError("PAC targets epsilon and delta must be positive");
  }
  if (grid.empty()) {
    throw ConfigError("PAC split grid is empty");
  }
  PacBudget best;
  best.epsilon = epsilon;
  best.delta = delta;
  bool found = false;
  for (const auto& split : grid) {
    if (!split_valid(split, epsilon, delta, unit)) {
      ++best.infeasible;
      continue;
    }
    const auto n_g = bound_g(split.epsilon_g, split.delta_g);
    const auto n_f = bound_f(split.epsilon_f, split.delta_f);
    const auto n = std::max(n_g, n_f);
    if (!found || n < best.n) {
      found = true;
      best.split = split;
      best.n_g = n_g;
      best.n_f = n_f;
      best.n = n;
    }
  }
  if (!found) {
    throw ConfigError("no valid split in the PAC grid (" + std::to_string(grid.size()) +
                      " candidates)");
  }
  return best;
}

}  // namespace

PacBudget pac_joint_budget(double epsilon, double delta, const ComponentBound& bound_g,
                           const ComponentBound& bound_f, std::span<const PacSplit> grid)
{
  return search(epsilon, delta, bound_g, bound_f, grid, false);
}

PacBudget pac_joint_budget(double epsilon, double delta, const HypothesisComplexity& g,
                           const HypothesisComplexity& f, std::span<const PacSplit> grid)
{
  return search(
      epsilon, delta, [&g](double e, double d) { return pac_component_bound(g, e, d); },
      [&f](double e, double d) { return pac_component_bound(f, e, d); }, grid, true);
}

std::vector<PacSplit> make_split_grid(double epsilon, double delta, std::size_t steps)
{
  if (steps < 4) {
    throw ConfigError("split grid needs at least 4 steps");
  }
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw ConfigError("split grid needs positive epsilon and delta");
  }
  const double n = static_cast<double>(steps);
  std::vector<PacSplit> grid;
  for (std::size_t i = 1; i + 2 < steps; ++i) {
    for (std::size_t j = 1; i + j + 1 < steps; ++j) {
      const std::size_t k = steps - 1 - i - j;
      for (std::size_t p = 1; p + 2 <= steps; ++p) {
        for (std::size_t q = 1; p + q + 1 <= steps; ++q) {
          const std::size_t r = steps - p - q;
          grid.push_back({epsilon * static_cast<double>(i) / n, epsilon * static_cast<double>(j) / n,
                          epsilon * static_cast<double>(k) / n, delta * static_cast<double>(p) / n,
                          delta * static_cast<double>(q) / n, delta * static_cast<double>(r) / n});
        }
      }
    }
  }
  return grid;
}

}  // namespace lam
