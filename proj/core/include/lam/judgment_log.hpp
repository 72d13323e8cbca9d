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


// Append-only judgment log: one JSON object per line after a fixed header
// line. Three record kinds, each with a fixed field order:
//
//   session   seq kind session auditor dataset subset rows time
//   serve     seq kind session row system time
//   judgment  seq kind session auditor row system label distance epsilon s
//             judgment_seq time
//
// `seq` increases by one across the whole log; a filtered export keeps the
// original numbers. See docs/log-format.md.

#ifndef LAM_JUDGMENT_LOG_HPP_
#define LAM_JUDGMENT_LOG_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"

namespace lam
{

inline constexpr std::string_view kLogHeader = R"({"format":"lam-judgment-log","version":1})";

enum class RecordKind
{
  kSession,
  kServe,
  kJudgment,
};

std::string_view to_string(RecordKind kind);

struct LogRecord
{
  std::uint64_t seq = 0;
  RecordKind kind = RecordKind::kJudgment;
  std::string session;
  std::string auditor;           ///< session, judgment
  std::string dataset;           ///< session
  std::int64_t subset = -1;      ///< session; -1 for an explicit row list
  std::vector<RowId> rows;       ///< session
  RowId row = 0;                 ///< serve, judgment
  std::string system;            ///< serve, judgment
  std::optional<std::string> label;   ///< judgment: elicited or intrinsic label
  std::optional<double> distance;     ///< judgment
  std::optional<double> epsilon;      ///< judgment
  std::optional<int> s;               ///< judgment verdict
  std::uint64_t judgment_seq = 0;     ///< judgment: 1, 2, ... per session
  std::string time;

  bool operator==(const LogRecord&) const = default;
};

/// One line of JSON, no trailing newline.
std::string to_json_line(const LogRecord& record);
/// Throws DataError on malformed or incomplete records.
LogRecord parse_json_line(std::string_view line);

/// Reads a whole log. Throws DataError on a bad header, a malformed line or
/// a sequence number that does not increase. Filtered exports skip numbers.
std::vector<LogRecord> read_log(std::istream& in);
std::vector<LogRecord> read_log_file(const std::filesystem::path& path);

/// Thread-safe appender. Each append is one atomic, flushed line.
class JudgmentLog
{
public:
  /// Memory-only log.
  JudgmentLog();
  /// Opens or creates `path`. An existing file is read (and validated) so
  /// that appends continue its sequence.
  explicit JudgmentLog(const std::filesystem::path& path);
  /// Memory-only log preloaded from exported text.
  static std::unique_ptr<JudgmentLog> from_text(std::string_view text);

  JudgmentLog(const JudgmentLog&) = delete;
  JudgmentLog& operator=(const JudgmentLog&) = delete;

  /// Assigns the next sequence number, writes the record and returns it.
  LogRecord append(LogRecord record);

  std::vector<LogRecord> records() const;
  std::uint64_t last_seq() const;
  std::size_t size() const;

  /// Header line plus the records accepted by `keep`, newline terminated.
  std::string export_text(const std::function<bool(const LogRecord&)>& keep = {}) const;

private:
  mutable std::mutex mutex_;
  std::vector<LogRecord> records_;
  std::vector<std::string> lines_;
  std::optional<std::ofstream> file_;
};

}  // namespace lam

#endif  // LAM_JUDGMENT_LOG_HPP_
