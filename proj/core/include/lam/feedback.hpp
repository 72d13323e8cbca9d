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


// Auditor feedback from either source the learners accept: a judgment log,
// or a CSV with `auditor,row,response` columns.

#ifndef LAM_FEEDBACK_HPP_
#define LAM_FEEDBACK_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/judgment_log.hpp"
#include "lam/learning.hpp"

namespace lam
{

struct FeedbackRecord
{
  std::string auditor;
  RowId row = 0;
  std::string response;

  bool operator==(const FeedbackRecord&) const = default;
};

/// Header must name `auditor`, `row` and `response`; other columns are
/// ignored. Throws DataError on any malformed row.
std::vector<FeedbackRecord> read_feedback_csv(std::istream& in);
std::vector<FeedbackRecord> load_feedback_csv(const std::filesystem::path& path);

/// One record per judgment: the elicited label when present, else s.
std::vector<FeedbackRecord> feedback_from_log(std::span<const LogRecord> records);

/// Groups records by auditor (first-appearance order) and pairs each with
/// its encoded row. Throws DataError on an unknown row id or a repeated
/// (auditor, row) pair.
std::vector<AuditorFeedback> group_feedback(std::span<const FeedbackRecord> records,
                                            const DataTable& encoded,
                                            const std::optional<std::string>& extra_column = std::nullopt);

}  // namespace lam

#endif  // LAM_FEEDBACK_HPP_
