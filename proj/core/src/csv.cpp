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

#include "lam/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{

std::string LoadResult::error_report(std::string_view source) const
{
  std::ostringstream out;
  out << "# rejected " << rejected.size() << " row(s) from " << source << "; accepted "
      << table.rows() << "\n";
  for (const auto& r : rejected) {
    out << "line " << r.line << ": " << r.reason << "\n";
  }
  return out.str();
}

std::vector<std::string> parse_csv_line(std::string_view line)
{
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

LoadResult read_csv(std::istream& in, const Schema& schema)
{
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw DataError("empty CSV input: no header row");
  }
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  auto header = parse_csv_line(line);
  for (auto& h : header) {
    h = std::string(text::trim(h));
  }

  std::vector<std::size_t> source_column;
  std::vector<std::string> missing;
  for (const auto& f : schema.features()) {
    const auto it = std::find(header.begin(), header.end(), f.name);
    if (it == header.end()) {
      missing.push_back(f.name);
    } else {
      source_column.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }
  if (!missing.empty()) {
    throw DataError("CSV header mismatch: missing column(s) " + text::join(missing, ", "));
  }

  LoadResult result;
  std::vector<RowId> ids;
  std::vector<std::vector<std::string>> columns(schema.size());
  RowId next_id = 0;
  std::vector<std::string> cells(schema.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) {
      continue;
    }
    const RowId row_id = next_id++;
    const auto fields = parse_csv_line(line);
    if (fields.size() != header.size()) {
      result.rejected.push_back({line_no, "expected " + std::to_string(header.size()) +
                                              " fields, found " + std::to_string(fields.size())});
      continue;
    }
    std::string reason;
    for (std::size_t c = 0; c < schema.size() && reason.empty(); ++c) {
      const auto& feature = schema.features()[c];
      cells[c] = std::string(text::trim(fields[source_column[c]]));
      if (cells[c].empty()) {
        reason = "empty value for '" + feature.name + "'";
      } else if (feature.kind == FeatureKind::kOrdinal && !text::parse_int(cells[c])) {
        reason = "non-integer value '" + cells[c] + "' for ordinal '" + feature.name + "'";
      } else if (!feature.levels.empty() &&
                 std::find(feature.levels.begin(), feature.levels.end(), cells[c]) ==
                     feature.levels.end()) {
        reason = "undeclared level '" + cells[c] + "' for '" + feature.name + "'";
      }
    }
    if (!reason.empty()) {
      result.rejected.push_back({line_no, reason});
      continue;
    }
    ids.push_back(row_id);
    for (std::size_t c = 0; c < schema.size(); ++c) {
      columns[c].push_back(std::move(cells[c]));
    }
  }
  if (ids.empty()) {
    throw DataError("CSV has zero valid rows (" + std::to_string(result.rejected.size()) +
                    " rejected)");
  }
  result.table = DataTable(schema, std::move(ids), std::move(columns));
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const Schema& schema)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open CSV file '" + path.string() + "'");
  }
  return read_csv(in, schema);
}

}  // namespace lam
