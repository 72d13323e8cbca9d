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


#include <benchmark/benchmark.h>

#include "lam/group_metrics.hpp"
#include "lam/random.hpp"
#include "lam/recipe.hpp"

namespace
{

using namespace lam;

void BM_FairnessDiff(benchmark::State& state)
{
  const auto d = load_dataset(LAM_BENCH_DATA_DIR "/adult.csv", builtin_recipe("adult"));
  const auto& truths = d.table.column(d.table.schema().outcome()->name);
  Rng rng(1);
  std::vector<std::string> preds(truths.size());
  for (auto& p : preds) {
    p = rng.uniform() < 0.3 ? "1" : "0";
  }
  const auto& attr = d.recipe.protected_attributes.front();
  const GroupPair pair{attr.name, "Female", attr.privileged, "1", 0.05};
  const auto notion = kAllNotions[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) {
    benchmark::DoNotOptimize(fairness_diff(notion, preds, truths, d.table, pair));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(truths.size()));
}
BENCHMARK(BM_FairnessDiff)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

}  // namespace
