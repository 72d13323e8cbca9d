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


// Self-describing report files:
//
//   # lam-audit report v1
//   # command metrics
//   # config recipe=compas-binary
//   # result rows=7214
//   ## section diffs
//   notion<TAB>attribute<TAB>...
//   ...
//
// `# config` lines echo every effective option, `# result` lines carry
// scalar outcomes, and each `## section` is one tab-separated table.

#ifndef LAM_TOOLS_REPORT_HPP_
#define LAM_TOOLS_REPORT_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lam::cli
{

class Report
{
public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void config(const std::string& key, const std::string& value);
  void result(const std::string& key, const std::string& value);
  /// Starts a new table; following rows belong to it.
  void section(const std::string& name, std::vector<std::string> columns);
  /// Throws lam::Error when the width does not match the current section.
  void row(std::vector<std::string> cells);

  std::string str() const;

private:
  struct Section
  {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
  };

  std::string command_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<std::pair<std::string, std::string>> results_;
  std::vector<Section> sections_;
};

struct ParsedReport
{
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> results;
  std::map<std::string, std::vector<std::map<std::string, std::string>>> sections;
};

/// Reads a report back. Throws lam::DataError on a malformed file.
ParsedReport parse_report(const std::string& text);

}  // namespace lam::cli

#endif  // LAM_TOOLS_REPORT_HPP_
