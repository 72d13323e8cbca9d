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

#include "lam/rule.hpp"

#include <algorithm>
#include <fstream>
#include <span>
#include <sstream>

#include "builtins.hpp"
#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam
{
namespace
{

[[noreturn]] void fail(std::size_t line_no, const std::string& message)
{
  throw ConfigError("rule line " + std::to_string(line_no) + ": " + message);
}

void validate(const AssessmentRule& rule)
{
  if (rule.name.empty()) {
    throw ConfigError("rule has no name");
  }
  if (rule.output_space.empty()) {
    throw ConfigError("rule '" + rule.name + "' needs an 'output' statement");
  }
  if (rule.default_label.empty()) {
    throw ConfigError("rule '" + rule.name + "' needs a 'default' label");
  }
  if (!rule.output_space.contains(rule.default_label)) {
    throw ConfigError("default label '" + rule.default_label + "' is not in the output space");
  }
  for (const auto& clause : rule.clauses) {
    if (!rule.output_space.contains(clause.label)) {
      throw ConfigError("clause label '" + clause.label + "' is not in the output space");
    }
  }
}

}  // namespace

std::vector<std::string> AssessmentRule::referenced_features() const
{
  std::vector<std::string> names;
  for (const auto& clause : clauses) {
    for (const auto& c : clause.conditions) {
      if (std::find(names.begin(), names.end(), c.feature) == names.end()) {
        names.push_back(c.feature);
      }
    }
  }
  return names;
}

AssessmentRule parse_rule(std::string_view source)
{
  AssessmentRule rule;
  bool seen_default = false;
  std::istringstream in{std::string(source)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto words = text::tokenize(line);
    if (words.empty()) {
      continue;
    }
    const std::string& keyword = words[0];
    const std::span<const std::string> args(words.data() + 1, words.size() - 1);
    if (keyword == "rule") {
      if (args.size() != 1) {
        fail(line_no, "'rule' takes one name");
      }
      rule.name = text::unquote(args[0]);
    } else if (keyword == "output") {
      try {
        if (args.size() == 1 && args[0] == "decile") {
          rule.output_space = OutputSpace::decile();
        } else {
          std::vector<std::string> labels;
          for (const auto& a : args) {
            labels.push_back(text::unquote(a));
          }
          if (labels.empty()) {
            fail(line_no, "'output' needs at least one label");
          }
          rule.output_space = OutputSpace(std::move(labels));
        }
      } catch (const ConfigError& e) {
        fail(line_no, e.what());
      }
    } else if (keyword == "when") {
      if (seen_default) {
        fail(line_no, "clause after 'default' can never match");
      }
      const auto arrow = std::find(args.begin(), args.end(), "=>");
      if (arrow == args.end() || std::next(arrow) == args.end() ||
          std::next(arrow, 2) != args.end()) {
        fail(line_no, "expected 'when <conditions> => <label>'");
      }
      RuleClause clause;
      try {
        clause.conditions = parse_conditions(args.first(static_cast<std::size_t>(arrow - args.begin())));
      } catch (const ConfigError& e) {
        fail(line_no, e.what());
      }
      clause.label = text::unquote(*std::next(arrow));
      rule.clauses.push_back(std::move(clause));
    } else if (keyword == "default") {
      if (args.size() != 1) {
        fail(line_no, "'default' takes one label");
      }
      if (seen_default) {
        fail(line_no, "second 'default'");
      }
      seen_default = true;
      rule.default_label = text::unquote(args[0]);
    } else {
      fail(line_no, "unknown statement '" + keyword + "'");
    }
  }
  validate(rule);
  return rule;
}

AssessmentRule load_rule(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open rule file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_rule(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_text(const AssessmentRule& rule)
{
  std::ostringstream out;
  out << "rule " << text::quote_if_needed(rule.name) << '\n';
  if (rule.output_space.kind() == OutputSpaceKind::kDecile) {
    out << "output decile\n";
  } else {
    out << "output";
    for (const auto& label : rule.output_space.labels()) {
      out << ' ' << text::quote_if_needed(label);
    }
    out << '\n';
  }
  for (const auto& clause : rule.clauses) {
    std::vector<std::string> parts;
    for (const auto& c : clause.conditions) {
      parts.push_back(c.to_string());
    }
    out << "when " << text::join(parts, " and ") << " => " << text::quote_if_needed(clause.label)
        << '\n';
  }
  out << "default " << text::quote_if_needed(rule.default_label) << '\n';
  return out.str();
}

std::vector<std::string> builtin_rule_names() { return {"f1", "f1-decile", "f2", "f3"}; }

AssessmentRule builtin_rule(std::string_view name)
{
  const char* source = detail::builtin_rule_text(name);
  if (source == nullptr) {
    throw ConfigError("unknown builtin rule '" + std::string(name) + "'");
  }
  return parse_rule(source);
}

const std::string& evaluate_rule(const AssessmentRule& rule, const RowView& row)
{
  for (const auto& clause : rule.clauses) {
    const bool hit = std::all_of(clause.conditions.begin(), clause.conditions.end(),
                                 [&row](const Condition& c) { return c.matches(row); });
    if (hit) {
      return clause.label;
    }
  }
  return rule.default_label;
}

std::vector<std::string> evaluate_rule(const AssessmentRule& rule, const DataTable& table)
{
  for (const auto& name : rule.referenced_features()) {
    if (!table.schema().find(name)) {
      throw ConfigError("rule '" + rule.name + "' reads feature '" + name +
                        "' which the table does not have");
    }
  }
  std::vector<std::string> labels;
  labels.reserve(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    labels.push_back(evaluate_rule(rule, table.row(r)));
  }
  return labels;
}

}  // namespace lam
