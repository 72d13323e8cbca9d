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

#include "lam/recipe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
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
  throw ConfigError("recipe line " + std::to_string(line_no) + ": " + message);
}

BinSpec parse_bin(std::size_t line_no, const std::string& word)
{
  const auto assignment = text::split_assignment(word);
  if (!assignment) {
    fail(line_no, "expected label=[lo,hi], got '" + word + "'");
  }
  const auto& [label, range] = *assignment;
  if (range.size() < 2 || range.front() != '[' || range.back() != ']') {
    fail(line_no, "bin range must be [lo,hi], got '" + range + "'");
  }
  const auto bounds = text::split(std::string_view(range).substr(1, range.size() - 2), ',');
  const auto lo = bounds.size() == 2 ? text::parse_double(bounds[0]) : std::nullopt;
  const auto hi = bounds.size() == 2 ? text::parse_double(bounds[1]) : std::nullopt;
  if (!lo || !hi || *lo > *hi) {
    fail(line_no, "bad bin range '" + range + "'");
  }
  return {label, *lo, *hi};
}

void parse_step(std::size_t line_no, std::span<const std::string> words, FeatureRole role,
                RecipeSpec& recipe)
{
  const std::string& keyword = words[0];
  if (words.size() < 3) {
    fail(line_no, "'" + keyword + "' needs a source and a target column");
  }
  RecipeStep step;
  step.source = text::unquote(words[1]);
  step.target = text::unquote(words[2]);
  step.role = role;
  if (keyword == "copy") {
    step.kind = StepKind::kCopy;
    if (words.size() != 3) {
      fail(line_no, "'copy' takes exactly a source and a target");
    }
  } else if (keyword == "bin") {
    step.kind = StepKind::kBin;
    for (std::size_t i = 3; i < words.size(); ++i) {
      step.bins.push_back(parse_bin(line_no, words[i]));
    }
    if (step.bins.empty()) {
      fail(line_no, "'bin' needs at least one label=[lo,hi]");
    }
    auto sorted = step.bins;
    std::sort(sorted.begin(), sorted.end(),
              [](const BinSpec& a, const BinSpec& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].lo <= sorted[i - 1].hi) {
        fail(line_no, "bins '" + sorted[i - 1].label + "' and '" + sorted[i].label + "' overlap");
      }
    }
  } else if (keyword == "map" || keyword == "outcome") {
    step.kind = keyword == "map" ? StepKind::kMap : StepKind::kOutcome;
    if (step.kind == StepKind::kOutcome) {
      step.role = FeatureRole::kOutcome;
    }
    std::set<std::string> keys;
    for (std::size_t i = 3; i < words.size(); ++i) {
      const auto assignment = text::split_assignment(words[i]);
      if (!assignment) {
        fail(line_no, "expected from=to, got '" + words[i] + "'");
      }
      if (assignment->first == "*" && words[i].front() != '"') {
        if (step.kind == StepKind::kOutcome) {
          fail(line_no, "label mapping cannot use a '*' catch-all");
        }
        step.fallback = assignment->second;
        continue;
      }
      if (!keys.insert(assignment->first).second) {
        fail(line_no, "level '" + assignment->first + "' mapped twice");
      }
      step.mapping.push_back(*assignment);
    }
    if (step.kind == StepKind::kMap && step.mapping.empty() && !step.fallback) {
      fail(line_no, "'map' needs at least one from=to");
    }
  } else {
    fail(line_no, "unknown statement '" + keyword + "'");
  }
  recipe.steps.push_back(std::move(step));
}

std::vector<std::string> declared_levels(const RecipeStep& step)
{
  std::vector<std::string> levels;
  auto add = [&levels](const std::string& l) {
    if (std::find(levels.begin(), levels.end(), l) == levels.end()) {
      levels.push_back(l);
    }
  };
  if (step.kind == StepKind::kBin) {
    for (const auto& b : step.bins) {
      add(b.label);
    }
  } else {
    for (const auto& [from, to] : step.mapping) {
      add(to);
    }
    if (step.fallback) {
      add(*step.fallback);
    }
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

void validate(const RecipeSpec& recipe)
{
  if (recipe.name.empty()) {
    throw ConfigError("recipe has no name");
  }
  std::set<std::string> inputs;
  for (const auto& f : recipe.inputs) {
    inputs.insert(f.name);
  }
  std::set<std::string> targets;
  std::size_t outcomes = 0;
  for (const auto& step : recipe.steps) {
    if (!inputs.count(step.source)) {
      throw ConfigError("recipe step reads undeclared input '" + step.source + "'");
    }
    if (!targets.insert(step.target).second) {
      throw ConfigError("recipe writes column '" + step.target + "' twice");
    }
    if (step.kind == StepKind::kOutcome) {
      ++outcomes;
    }
  }
  for (const auto& c : recipe.filters) {
    if (!inputs.count(c.feature)) {
      throw ConfigError("recipe filter reads undeclared input '" + c.feature + "'");
    }
  }
  if (outcomes > 1) {
    throw ConfigError("recipe declares more than one outcome");
  }
  if (outcomes == 1) {
    if (recipe.output_space.empty()) {
      throw ConfigError("recipe with an outcome needs an 'output' statement");
    }
    if (!recipe.output_space.contains(recipe.favorable)) {
      throw ConfigError("favorable label '" + recipe.favorable + "' is not in the output space");
    }
    const auto& step = *std::find_if(recipe.steps.begin(), recipe.steps.end(), [](const auto& s) {
      return s.kind == StepKind::kOutcome;
    });
    if (!step.mapping.empty()) {
      std::set<std::string> images;
      for (const auto& [from, to] : step.mapping) {
        if (!recipe.output_space.contains(to)) {
          throw ConfigError("label mapping target '" + to + "' is not in the output space");
        }
        images.insert(to);
      }
      if (images.size() != step.mapping.size() ||
          images.size() != recipe.output_space.labels().size()) {
        throw ConfigError("label mapping is not a bijection onto the output space");
      }
    }
  }
  for (const auto& p : recipe.protected_attributes) {
    if (!targets.count(p.name)) {
      throw ConfigError("protected attribute '" + p.name + "' is not produced by the recipe");
    }
  }
  if (recipe.system_column && !targets.count(*recipe.system_column)) {
    throw ConfigError("system column '" + *recipe.system_column +
                      "' is not produced by the recipe");
  }
}

std::string format_bound(double v) { return text::format_double(v); }

}  // namespace

Schema RecipeSpec::raw_schema() const { return Schema(inputs); }

RecipeSpec parse_recipe(std::string_view source)
{
  RecipeSpec recipe;
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
    if (keyword == "recipe") {
      if (args.size() != 1) {
        fail(line_no, "'recipe' takes one name");
      }
      recipe.name = text::unquote(args[0]);
    } else if (keyword == "input") {
      if (args.size() != 2) {
        fail(line_no, "'input' takes a column name and a kind");
      }
      try {
        recipe.inputs.push_back({text::unquote(args[0]), parse_feature_kind(args[1]),
                                 FeatureRole::kInput, {}});
      } catch (const ConfigError& e) {
        fail(line_no, e.what());
      }
    } else if (keyword == "filter") {
      try {
        for (auto& c : parse_conditions(args)) {
          recipe.filters.push_back(std::move(c));
        }
      } catch (const ConfigError& e) {
        fail(line_no, e.what());
      }
    } else if (keyword == "aux") {
      if (args.empty() || args[0] == "outcome") {
        fail(line_no, "'aux' must prefix copy, bin or map");
      }
      parse_step(line_no, args, FeatureRole::kAuxiliary, recipe);
    } else if (keyword == "output") {
      if (args.size() == 1 && args[0] == "decile") {
        recipe.output_space = OutputSpace::decile();
      } else {
        std::vector<std::string> labels;
        for (const auto& a : args) {
          labels.push_back(text::unquote(a));
        }
        if (labels.empty()) {
          fail(line_no, "'output' needs at least one label");
        }
        try {
          recipe.output_space = OutputSpace(std::move(labels));
        } catch (const ConfigError& e) {
          fail(line_no, e.what());
        }
      }
    } else if (keyword == "favorable") {
      if (args.size() != 1) {
        fail(line_no, "'favorable' takes one label");
      }
      recipe.favorable = text::unquote(args[0]);
    } else if (keyword == "protected") {
      if (args.size() != 2) {
        fail(line_no, "'protected' takes a feature and its privileged value");
      }
      recipe.protected_attributes.push_back({text::unquote(args[0]), text::unquote(args[1])});
    } else if (keyword == "system") {
      if (args.size() != 1) {
        fail(line_no, "'system' takes one column");
      }
      recipe.system_column = text::unquote(args[0]);
    } else {
      parse_step(line_no, words, FeatureRole::kInput, recipe);
    }
  }
  validate(recipe);
  return recipe;
}

RecipeSpec load_recipe(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open recipe file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_recipe(buffer.str());
}

std::string to_text(const RecipeSpec& recipe)
{
  std::ostringstream out;
  out << "recipe " << text::quote_if_needed(recipe.name) << "\n";
  for (const auto& f : recipe.inputs) {
    out << "input " << text::quote_if_needed(f.name) << " " << to_string(f.kind) << "\n";
  }
  for (const auto& c : recipe.filters) {
    out << "filter " << c.to_string() << "\n";
  }
  for (const auto& step : recipe.steps) {
    if (step.role == FeatureRole::kAuxiliary) {
      out << "aux ";
    }
    switch (step.kind) {
      case StepKind::kCopy:
        out << "copy";
        break;
      case StepKind::kBin:
        out << "bin";
        break;
      case StepKind::kMap:
        out << "map";
        break;
      case StepKind::kOutcome:
        out << "outcome";
        break;
    }
    out << " " << text::quote_if_needed(step.source) << " " << text::quote_if_needed(step.target);
    for (const auto& b : step.bins) {
      out << " " << text::quote_if_needed(b.label) << "=[" << format_bound(b.lo) << ","
          << format_bound(b.hi) << "]";
    }
    for (const auto& [from, to] : step.mapping) {
      out << " " << text::quote_if_needed(from) << "=" << text::quote_if_needed(to);
    }
    if (step.fallback) {
      out << " *=" << text::quote_if_needed(*step.fallback);
    }
    out << "\n";
  }
  if (!recipe.output_space.empty()) {
    out << "output";
    for (const auto& l : recipe.output_space.labels()) {
      out << " " << text::quote_if_needed(l);
    }
    out << "\n";
  }
  if (!recipe.favorable.empty()) {
    out << "favorable " << text::quote_if_needed(recipe.favorable) << "\n";
  }
  for (const auto& p : recipe.protected_attributes) {
    out << "protected " << text::quote_if_needed(p.name) << " "
        << text::quote_if_needed(p.privileged) << "\n";
  }
  if (recipe.system_column) {
    out << "system " << text::quote_if_needed(*recipe.system_column) << "\n";
  }
  return out.str();
}

std::vector<std::string> builtin_recipe_names()
{
  return {"compas-binary", "compas-decile", "german", "adult"};
}

RecipeSpec builtin_recipe(std::string_view name)
{
  const auto* source = detail::builtin_recipe_text(name);
  if (source == nullptr) {
    throw ConfigError("unknown recipe '" + std::string(name) + "'");
  }
  return parse_recipe(source);
}

DataTable filter_rows(const DataTable& table, const std::vector<Condition>& conditions)
{
  for (const auto& c : conditions) {
    table.schema().index_of(c.feature);
  }
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto row = table.row(r);
    if (std::all_of(conditions.begin(), conditions.end(),
                    [&row](const Condition& c) { return c.matches(row); })) {
      keep.push_back(r);
    }
  }
  return table.select_rows(keep);
}

DataTable apply_recipe(const DataTable& table, const RecipeSpec& recipe)
{
  const Schema& in_schema = table.schema();
  std::vector<Feature> features;
  std::vector<std::vector<std::string>> columns;
  std::optional<OutcomeSpec> outcome;

  for (const auto& step : recipe.steps) {
    const auto src = in_schema.find(step.source);
    if (!src) {
      throw ConfigError("recipe '" + recipe.name + "' references column '" + step.source +
                        "' absent from the table");
    }
    const auto& values = table.column(*src);
    std::vector<std::string> out;
    out.reserve(values.size());
    Feature feature;
    feature.name = step.target;
    feature.role = step.role;

    switch (step.kind) {
      case StepKind::kCopy:
        out = values;
        feature.kind = in_schema.features()[*src].kind;
        break;
      case StepKind::kBin:
        for (std::size_t r = 0; r < values.size(); ++r) {
          const auto x = text::parse_double(values[r]);
          const BinSpec* hit = nullptr;
          if (x) {
            for (const auto& b : step.bins) {
              if (b.lo <= *x && *x <= b.hi) {
                hit = &b;
                break;
              }
            }
          }
          if (hit == nullptr) {
            throw DataError("row " + std::to_string(table.id(r)) + ": value '" + values[r] +
                            "' of '" + step.source + "' is outside every bin");
          }
          out.push_back(hit->label);
        }
        feature.kind = FeatureKind::kCategorical;
        feature.levels = declared_levels(step);
        break;
      case StepKind::kMap:
      case StepKind::kOutcome: {
        const std::map<std::string, std::string> lookup(step.mapping.begin(), step.mapping.end());
        const bool identity = step.kind == StepKind::kOutcome && step.mapping.empty();
        for (std::size_t r = 0; r < values.size(); ++r) {
          if (identity) {
            if (!recipe.output_space.contains(values[r])) {
              throw DataError("row " + std::to_string(table.id(r)) + ": outcome '" + values[r] +
                              "' is not in the output space");
            }
            out.push_back(values[r]);
            continue;
          }
          const auto it = lookup.find(values[r]);
          if (it != lookup.end()) {
            out.push_back(it->second);
          } else if (step.fallback) {
            out.push_back(*step.fallback);
          } else {
            throw DataError("row " + std::to_string(table.id(r)) + ": unmapped level '" +
                            values[r] + "' of '" + step.source + "'");
          }
        }
        feature.kind = FeatureKind::kCategorical;
        if (step.kind == StepKind::kOutcome) {
          feature.levels = recipe.output_space.labels();
          outcome = OutcomeSpec{step.target, recipe.favorable};
        } else {
          feature.levels = declared_levels(step);
        }
        break;
      }
    }
    if (feature.levels.empty()) {
      const std::set<std::string> seen(out.begin(), out.end());
      feature.levels.assign(seen.begin(), seen.end());
    }
    if (feature.kind == FeatureKind::kCategorical && feature.levels.size() == 2) {
      feature.kind = FeatureKind::kBinary;
    }
    features.push_back(std::move(feature));
    columns.push_back(std::move(out));
  }

  OutputSpace space = outcome ? recipe.output_space : OutputSpace{};
  Schema schema(std::move(features), recipe.protected_attributes, std::move(outcome),
                std::move(space));
  return DataTable(std::move(schema), table.ids(), std::move(columns));
}

PreparedDataset load_dataset(const std::filesystem::path& csv, const RecipeSpec& recipe)
{
  auto loaded = load_csv(csv, recipe.raw_schema());
  DataTable table = loaded.table;
  if (!recipe.filters.empty()) {
    table = filter_rows(table, recipe.filters);
    if (table.empty()) {
      throw DataError("recipe filters removed every row");
    }
  }
  return {apply_recipe(table, recipe), std::move(loaded.rejected), recipe};
}

}  // namespace lam
