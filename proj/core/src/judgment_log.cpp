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


#include "lam/judgment_log.hpp"

#include <istream>
#include <sstream>

#include "json.hpp"

#include "lam/error.hpp"

namespace lam
{
namespace
{

using ordered_json = nlohmann::ordered_json;

template <typename T>
T field(const nlohmann::json& object, const char* name)
{
  const auto it = object.find(name);
  if (it == object.end()) {
    throw DataError(std::string("log record lacks '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string("log record field '") + name + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> nullable(const nlohmann::json& object, const char* name)
{
  const auto it = object.find(name);
  if (it == object.end()) {
    throw DataError(std::string("log record lacks '") + name + "'");
  }
  if (it->is_null()) {
    return std::nullopt;
  }
  return field<T>(object, name);
}

template <typename T>
ordered_json or_null(const std::optional<T>& value)
{
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

RecordKind parse_kind(const std::string& text)
{
  if (text == "session") {
    return RecordKind::kSession;
  }
  if (text == "serve") {
    return RecordKind::kServe;
  }
  if (text == "judgment") {
    return RecordKind::kJudgment;
  }
  throw DataError("unknown log record kind '" + text + "'");
}

void check_header(const std::string& line)
{
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw DataError("judgment log header is not JSON");
  }
  if (header != nlohmann::json::parse(kLogHeader)) {
    throw DataError("not a lam judgment log (header " + line + ")");
  }
}

}  // namespace

std::string_view to_string(RecordKind kind)
{
  switch (kind) {
    case RecordKind::kSession:
      return "session";
    case RecordKind::kServe:
      return "serve";
    case RecordKind::kJudgment:
      return "judgment";
  }
  return "?";
}

std::string to_json_line(const LogRecord& r)
{
  ordered_json j;
  j["seq"] = r.seq;
  j["kind"] = std::string(to_string(r.kind));
  j["session"] = r.session;
  switch (r.kind) {
    case RecordKind::kSession:
      j["auditor"] = r.auditor;
      j["dataset"] = r.dataset;
      j["subset"] = r.subset;
      j["rows"] = r.rows;
      break;
    case RecordKind::kServe:
      j["row"] = r.row;
      j["system"] = r.system;
      break;
    case RecordKind::kJudgment:
      j["auditor"] = r.auditor;
      j["row"] = r.row;
      j["system"] = r.system;
      j["label"] = or_null(r.label);
      j["distance"] = or_null(r.distance);
      j["epsilon"] = or_null(r.epsilon);
      j["s"] = or_null(r.s);
      j["judgment_seq"] = r.judgment_seq;
      break;
  }
  j["time"] = r.time;
  return j.dump();
}

LogRecord parse_json_line(std::string_view line)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("log line is not JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw DataError("log line is not a JSON object");
  }
  LogRecord r;
  r.seq = field<std::uint64_t>(j, "seq");
  r.kind = parse_kind(field<std::string>(j, "kind"));
  r.session = field<std::string>(j, "session");
  r.time = field<std::string>(j, "time");
  switch (r.kind) {
    case RecordKind::kSession:
      r.auditor = field<std::string>(j, "auditor");
      r.dataset = field<std::string>(j, "dataset");
      r.subset = field<std::int64_t>(j, "subset");
      r.rows = field<std::vector<RowId>>(j, "rows");
      break;
    case RecordKind::kServe:
      r.row = field<RowId>(j, "row");
      r.system = field<std::string>(j, "system");
      break;
    case RecordKind::kJudgment:
      r.auditor = field<std::string>(j, "auditor");
      r.row = field<RowId>(j, "row");
      r.system = field<std::string>(j, "system");
      r.label = nullable<std::string>(j, "label");
      r.distance = nullable<double>(j, "distance");
      r.epsilon = nullable<double>(j, "epsilon");
      r.s = nullable<int>(j, "s");
      r.judgment_seq = field<std::uint64_t>(j, "judgment_seq");
      if (!r.s && !r.label) {
        throw DataError("judgment record " + std::to_string(r.seq) + " has neither s nor label");
      }
      if (r.s && *r.s != 0 && *r.s != 1) {
        throw DataError("judgment record " + std::to_string(r.seq) + " has s outside {0, 1}");
      }
      break;
  }
  return r;
}

std::vector<LogRecord> read_log(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("judgment log is empty (no header line)");
  }
  check_header(line);
  std::vector<LogRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      records.push_back(parse_json_line(line));
    } catch (const DataError& e) {
      throw DataError("judgment log line " + std::to_string(line_no) + ": " + e.what());
    }
    if (records.size() > 1 && records.back().seq <= records[records.size() - 2].seq) {
      throw DataError("judgment log line " + std::to_string(line_no) + ": sequence number " +
                      std::to_string(records.back().seq) + " does not increase");
    }
  }
  return records;
}

std::vector<LogRecord> read_log_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open judgment log " + path.string());
  }
  try {
    return read_log(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

JudgmentLog::JudgmentLog() = default;

JudgmentLog::JudgmentLog(const std::filesystem::path& path)
{
  std::error_code ec;
  const bool existing = std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0;
  if (existing) {
    records_ = read_log_file(path);
    for (const auto& r : records_) {
      lines_.push_back(to_json_line(r));
    }
  }
  file_.emplace(path, std::ios::app | std::ios::binary);
  if (!*file_) {
    throw DataError("cannot open judgment log " + path.string() + " for appending");
  }
  if (!existing) {
    *file_ << kLogHeader << '\n';
    file_->flush();
  }
}

std::unique_ptr<JudgmentLog> JudgmentLog::from_text(std::string_view text)
{
  std::istringstream in{std::string(text)};
  auto log = std::make_unique<JudgmentLog>();
  log->records_ = read_log(in);
  for (const auto& r : log->records_) {
    log->lines_.push_back(to_json_line(r));
  }
  return log;
}

LogRecord JudgmentLog::append(LogRecord record)
{
  const std::lock_guard lock(mutex_);
  record.seq = records_.empty() ? 1 : records_.back().seq + 1;
  auto line = to_json_line(record);
  if (file_) {
    *file_ << line << '\n';
    file_->flush();
    if (!*file_) {
      throw Error("write to judgment log failed");
    }
  }
  lines_.push_back(std::move(line));
  records_.push_back(record);
  return record;
}

std::vector<LogRecord> JudgmentLog::records() const
{
  const std::lock_guard lock(mutex_);
  return records_;
}

std::uint64_t JudgmentLog::last_seq() const
{
  const std::lock_guard lock(mutex_);
  return records_.empty() ? 0 : records_.back().seq;
}

std::size_t JudgmentLog::size() const
{
  const std::lock_guard lock(mutex_);
  return records_.size();
}

std::string JudgmentLog::export_text(const std::function<bool(const LogRecord&)>& keep) const
{
  std::vector<std::string> lines;
  {
    const std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (!keep || keep(records_[i])) {
        lines.push_back(lines_[i]);
      }
    }
  }
  std::string out(kLogHeader);
  out += '\n';
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace lam
