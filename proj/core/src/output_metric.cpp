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

#include "lam/output_metric.hpp"

#include <cmath>

#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{

std::string_view to_string(OutputMetric metric)
{
  return metric == OutputMetric::kDiscrete ? "discrete" : "absolute";
}

OutputMetric parse_output_metric(std::string_view text)
{
  if (text == "discrete") {
    return OutputMetric::kDiscrete;
  }
  if (text == "absolute") {
    return OutputMetric::kAbsolute;
  }
  throw ConfigError("unknown output metric '" + std::string(text) + "'");
}

double output_distance(std::string_view a, std::string_view b, OutputMetric metric)
{
  if (metric == OutputMetric::kDiscrete) {
    return a == b ? 0.0 : 1.0;
  }
  const auto x = text::parse_double(a);
  const auto y = text::parse_double(b);
  if (!x || !y) {
    throw ConfigError("absolute output metric needs numeric labels, got '" + std::string(a) +
                      "' and '" + std::string(b) + "'");
  }
  return std::fabs(*x - *y);
}

}  // namespace lam
