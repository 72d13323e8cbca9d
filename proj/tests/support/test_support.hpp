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


// Helpers shared by the test binaries: small table builders and seeded
// generators for the property tests.

#ifndef LAM_TESTS_SUPPORT_HPP_
#define LAM_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/random.hpp"
#include "lam/schema.hpp"

#ifndef LAM_TEST_DATA_DIR
#define LAM_TEST_DATA_DIR "data"
#endif

namespace lam::test
{

inline std::filesystem::path data_path(const std::string& name)
{
  return std::filesystem::path(LAM_TEST_DATA_DIR) / name;
}

/// Categorical input features named by `names`, levels inferred from data.
/// The column "y", when present, becomes the outcome with favorable "1".
inline DataTable make_table(const std::vector<std::pair<std::string, std::vector<std::string>>>& cols)
{
  std::vector<Feature> features;
  std::vector<std::vector<std::string>> columns;
  std::optional<OutcomeSpec> outcome;
  for (const auto& [name, values] : cols) {
    Feature f;
    f.name = name;
    f.kind = FeatureKind::kCategorical;
    if (name == "y") {
      f.role = FeatureRole::kOutcome;
      outcome = OutcomeSpec{"y", "1"};
    }
    features.push_back(f);
    columns.push_back(values);
  }
  std::vector<RowId> ids(columns.empty() ? 0 : columns.front().size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ids[i] = static_cast<RowId>(i);
  }
  return DataTable(Schema(features, {}, outcome, outcome ? OutputSpace({"0", "1"}) : OutputSpace()),
                   ids, columns);
}

inline std::string pick(Rng& rng, const std::vector<std::string>& values)
{
  return values[rng.index(values.size())];
}

inline std::vector<std::string> random_labels(Rng& rng, std::size_t n,
                                              const std::vector<std::string>& space)
{
  std::vector<std::string> out(n);
  for (auto& v : out) {
    v = pick(rng, space);
  }
  return out;
}

/// Random population: attribute "a" over {p, q, r} and outcome "y" over
/// {0, 1}, with predictions drawn independently.
struct Population
{
  DataTable table;
  std::vector<std::string> predictions;
  std::vector<std::string> truths;
};

inline Population random_population(Rng& rng, std::size_t max_rows)
{
  const auto n = 1 + rng.index(max_rows);
  // Skewed draws so that empty conditionals show up now and then.
  const double p_one = rng.uniform();
  const double t_one = rng.uniform();
  Population pop;
  std::vector<std::string> attr(n);
  pop.predictions.resize(n);
  pop.truths.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    attr[i] = pick(rng, {"p", "q", "r"});
    pop.predictions[i] = rng.uniform() < p_one ? "1" : "0";
    pop.truths[i] = rng.uniform() < t_one ? "1" : "0";
  }
  pop.table = make_table({{"a", attr}, {"y", pop.truths}});
  return pop;
}

}  // namespace lam::test

#endif  // LAM_TESTS_SUPPORT_HPP_
