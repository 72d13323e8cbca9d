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


// Sample budgets for certifying an auditor model. Component bounds N_g and
// N_f come from standard realizable PAC bounds; the joint budget searches a
// grid of (epsilon, delta) splits for the smallest max{N_g, N_f}.

#ifndef LAM_PAC_HPP_
#define LAM_PAC_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lam
{

struct HypothesisComplexity
{
  enum class Measure
  {
    kFiniteClass,  ///< value = |H|
    kVcDimension,  ///< value = d
  };

  Measure measure = Measure::kFiniteClass;
  double value = 1.0;

  static HypothesisComplexity finite(double size) { return {Measure::kFiniteClass, size}; }
  static HypothesisComplexity vc(double dimension) { return {Measure::kVcDimension, dimension}; }
  std::string to_string() const;
};

/// Finite class: ceil((ln|H| + ln(1/delta)) / epsilon).
/// VC dimension d: ceil((4/epsilon) (d log2(12/epsilon) + log2(2/delta))).
/// Throws ConfigError unless epsilon, delta lie in (0, 1) and the
/// complexity is at least 1.
std::uint64_t pac_component_bound(const HypothesisComplexity& complexity, double epsilon,
                                  double delta);

struct PacSplit
{
  double epsilon_g = 0.0;
  double epsilon_f = 0.0;
  double epsilon_ncf = 0.0;
  double delta_g = 0.0;
  double delta_f = 0.0;
  double delta_ncf = 0.0;

  bool operator==(const PacSplit&) const = default;
};

/// All six parts positive, epsilon parts summing below epsilon and delta
/// parts summing below 2 + delta. With `unit_components` every part must
/// also be below 1, as the component bounds require.
bool split_valid(const PacSplit& split, double epsilon, double delta, bool unit_components);

struct PacBudget
{
  double epsilon = 0.0;
  double delta = 0.0;
  PacSplit split;
  std::uint64_t n_g = 0;
  std::uint64_t n_f = 0;
  std::uint64_t n = 0;  ///< max{n_g, n_f}
  std::size_t infeasible = 0;
};

using ComponentBound = std::function<std::uint64_t(double epsilon, double delta)>;

/// Minimises max{N_g, N_f} over the valid splits of the grid; ties keep the
/// earliest split. Throws ConfigError when the grid is empty or has no
/// valid split.
PacBudget pac_joint_budget(double epsilon, double delta, const ComponentBound& bound_g,
                           const ComponentBound& bound_f, std::span<const PacSplit> grid);
PacBudget pac_joint_budget(double epsilon, double delta, const HypothesisComplexity& g,
                           const HypothesisComplexity& f, std::span<const PacSplit> grid);

/// Splits with epsilon parts epsilon * (i, j, k) / steps where i + j + k =
/// steps - 1, and delta parts delta * (p, q, r) / steps where p + q + r =
/// steps, all indices positive. Every split is valid for delta < 1.
std::vector<PacSplit> make_split_grid(double epsilon, double delta, std::size_t steps);

}  // namespace lam

#endif  // LAM_PAC_HPP_
