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

#ifndef LAM_CSV_HPP_
#define LAM_CSV_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"

namespace lam
{

struct RejectedRow
{
  std::size_t line = 0;  ///< 1-based physical line in the source
  std::string reason;
};

struct LoadResult
{
  DataTable table;
  std::vector<RejectedRow> rejected;

  /// Line-oriented report: a summary line, then one `line N: reason` entry
  /// per rejected row.
  std::string error_report(std::string_view source) const;
};

/// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> parse_csv_line(std::string_view line);

/// Reads comma-separated data with a header row. Every schema feature must
/// appear in the header; extra columns are ignored. Rows whose values do
/// not fit their feature kind (non-integer ordinal, undeclared level, empty
/// cell, wrong field count) are rejected and reported, never fatal.
/// Row ids are the 0-based position of the data line in the file.
///
/// Throws DataError on a missing file, header mismatch, or zero valid rows.
LoadResult load_csv(const std::filesystem::path& path, const Schema& schema);
LoadResult read_csv(std::istream& in, const Schema& schema);

}  // namespace lam

#endif  // LAM_CSV_HPP_
