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

#ifndef LAM_OUTPUT_METRIC_HPP_
#define LAM_OUTPUT_METRIC_HPP_

#include <string>
#include <string_view>

namespace lam
{

/// Distance d on the output space.
enum class OutputMetric
{
  kDiscrete,  ///< 0 when labels are equal, 1 otherwise
  kAbsolute,  ///< |a - b| on numeric labels (decile scores)
};

std::string_view to_string(OutputMetric metric);
OutputMetric parse_output_metric(std::string_view text);

/// Throws ConfigError when kAbsolute meets a non-numeric label.
double output_distance(std::string_view a, std::string_view b, OutputMetric metric);

}  // namespace lam

#endif  // LAM_OUTPUT_METRIC_HPP_
