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


#include "report.hpp"

#include <sstream>

#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam::cli
{
namespace
{

std::string clean(const std::string& cell)
{
  std::string out = cell;
  for (auto& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') {
      c = ' ';
    }
  }
  return out;
}

}  // namespace

void Report::config(const std::string& key, const std::string& value)
{
  config_.emplace_back(key, clean(value));
}

void Report::result(const std::string& key, const std::string& value)
{
  results_.emplace_back(key, clean(value));
}

void Report::section(const std::string& name, std::vector<std::string> columns)
{
  sections_.push_back({name, std::move(columns), {}});
}

void Report::row(std::vector<std::string> cells)
{
  if (sections_.empty() || cells.size() != sections_.back().columns.size()) {
    throw Error("report row does not match its section");
  }
  for (auto& c : cells) {
    c = clean(c);
  }
  sections_.back().rows.push_back(std::move(cells));
}

std::string Report::str() const
{
  std::ostringstream out;
  out << "# lam-audit report v1\n";
  out << "# command " << command_ << '\n';
  for (const auto& [k, v] : config_) {
    out << "# config " << k << '=' << v << '\n';
  }
  for (const auto& [k, v] : results_) {
    out << "# result " << k << '=' << v << '\n';
  }
  for (const auto& s : sections_) {
    out << "## section " << s.name << '\n';
    out << text::join(s.columns, "\t") << '\n';
    for (const auto& r : s.rows) {
      out << text::join(r, "\t") << '\n';
    }
  }
  return out.str();
}

ParsedReport parse_report(const std::string& source)
{
  ParsedReport report;
  std::istringstream in(source);
  std::string line;
  if (!std::getline(in, line) || line != "# lam-audit report v1") {
    throw DataError("not a lam-audit report");
  }
  std::vector<std::string> columns;
  std::vector<std::map<std::string, std::string>>* rows = nullptr;
  while (std::getline(in, line)) {
    if (line.rfind("## section ", 0) == 0) {
      rows = &report.sections[line.substr(11)];
      if (!std::getline(in, line)) {
        throw DataError("report section without a header row");
      }
      columns = text::split(line, '\t');
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      const auto rest = line.substr(2);
      const auto space = rest.find(' ');
      const auto kind = rest.substr(0, space);
      const auto body = space == std::string::npos ? "" : rest.substr(space + 1);
      if (kind == "command") {
        report.command = body;
      } else if (kind == "config" || kind == "result") {
        const auto eq = body.find('=');
        (kind == "config" ? report.config : report.results)[body.substr(0, eq)] =
            eq == std::string::npos ? "" : body.substr(eq + 1);
      }
      continue;
    }
    if (rows == nullptr) {
      throw DataError("report data before any section");
    }
    const auto cells = text::split(line, '\t');
    if (cells.size() != columns.size()) {
      throw DataError("report row width does not match its header");
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      row[columns[i]] = cells[i];
    }
    rows->push_back(std::move(row));
  }
  return report;
}

}  // namespace lam::cli
