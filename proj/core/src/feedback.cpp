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


#include "lam/feedback.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <unordered_map>

#include "lam/csv.hpp"
#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{

std::vector<FeedbackRecord> read_feedback_csv(std::istream& in)
{
  const Schema schema({{"auditor", FeatureKind::kCategorical, FeatureRole::kInput, {}},
                       {"row", FeatureKind::kOrdinal, FeatureRole::kInput, {}},
                       {"response", FeatureKind::kCategorical, FeatureRole::kInput, {}}});
  const auto loaded = read_csv(in, schema);
  if (!loaded.rejected.empty()) {
    throw DataError(loaded.error_report("feedback"));
  }
  const auto& table = loaded.table;
  std::vector<FeedbackRecord> out;
  out.reserve(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out.push_back({table.at(r, 0), *text::parse_int(table.at(r, 1)), table.at(r, 2)});
  }
  return out;
}

std::vector<FeedbackRecord> load_feedback_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open feedback file " + path.string());
  }
  try {
    return read_feedback_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<FeedbackRecord> feedback_from_log(std::span<const LogRecord> records)
{
  std::vector<FeedbackRecord> out;
  for (const auto& r : records) {
    if (r.kind != RecordKind::kJudgment) {
      continue;
    }
    out.push_back({r.auditor, r.row, r.label ? *r.label : std::to_string(*r.s)});
  }
  return out;
}

std::vector<AuditorFeedback> group_feedback(std::span<const FeedbackRecord> records,
                                            const DataTable& encoded,
                                            const std::optional<std::string>& extra_column)
{
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<const FeedbackRecord*>> by_auditor;
  for (const auto& r : records) {
    auto [it, inserted] = by_auditor.try_emplace(r.auditor);
    if (inserted) {
      order.push_back(r.auditor);
    }
    it->second.push_back(&r);
  }
  std::vector<AuditorFeedback> out;
  out.reserve(order.size());
  for (const auto& auditor : order) {
    const auto& list = by_auditor[auditor];
    AuditorFeedback feedback;
    feedback.auditor = auditor;
    std::vector<std::size_t> indices;
    std::vector<std::string> labels;
    std::set<RowId> seen;
    for (const auto* r : list) {
      const auto index = encoded.row_index(r->row);
      if (!index) {
        throw DataError("feedback from '" + auditor + "' names unknown row " +
                        std::to_string(r->row));
      }
      if (!seen.insert(r->row).second) {
        throw DataError("feedback from '" + auditor + "' repeats row " + std::to_string(r->row));
      }
      feedback.rows.push_back(r->row);
      indices.push_back(*index);
      labels.push_back(r->response);
    }
    feedback.examples = make_examples(encoded, indices, labels, extra_column);
    out.push_back(std::move(feedback));
  }
  return out;
}

}  // namespace lam
