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

#include "lam/schema.hpp"

#include <algorithm>
#include <set>

#include "lam/error.hpp"

namespace lam
{

std::string_view to_string(FeatureKind kind)
{
  switch (kind) {
    case FeatureKind::kBinary:
      return "binary";
    case FeatureKind::kCategorical:
      return "categorical";
    case FeatureKind::kOrdinal:
      return "ordinal";
  }
  return "?";
}

std::string_view to_string(FeatureRole role)
{
  switch (role) {
    case FeatureRole::kInput:
      return "input";
    case FeatureRole::kOutcome:
      return "outcome";
    case FeatureRole::kAuxiliary:
      return "auxiliary";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view text)
{
  if (text == "binary") {
    return FeatureKind::kBinary;
  }
  if (text == "categorical") {
    return FeatureKind::kCategorical;
  }
  if (text == "ordinal" || text == "ordinal-integer") {
    return FeatureKind::kOrdinal;
  }
  throw ConfigError("unknown feature kind '" + std::string(text) + "'");
}

OutputSpace::OutputSpace(std::vector<std::string> labels) : labels_(std::move(labels))
{
  std::set<std::string> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size()) {
    throw ConfigError("output space has duplicate labels");
  }
  if (labels_.size() == 2) {
    kind_ = OutputSpaceKind::kBinary;
  }
  const std::vector<std::string> deciles = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"};
  if (labels_ == deciles) {
    kind_ = OutputSpaceKind::kDecile;
  }
}

OutputSpace OutputSpace::decile()
{
  return OutputSpace({"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"});
}

bool OutputSpace::contains(std::string_view label) const
{
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

Schema::Schema(std::vector<Feature> features, std::vector<ProtectedAttribute> protected_attributes,
               std::optional<OutcomeSpec> outcome, OutputSpace output_space)
    : features_(std::move(features)),
      protected_(std::move(protected_attributes)),
      outcome_(std::move(outcome)),
      output_space_(std::move(output_space))
{
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) {
      throw ConfigError("feature with empty name");
    }
    if (!names.insert(f.name).second) {
      throw ConfigError("duplicate feature '" + f.name + "'");
    }
  }
  for (const auto& p : protected_) {
    const auto idx = find(p.name);
    if (!idx) {
      throw ConfigError("protected attribute '" + p.name + "' is not a feature");
    }
    const auto& levels = features_[*idx].levels;
    if (!levels.empty() && std::find(levels.begin(), levels.end(), p.privileged) == levels.end()) {
      throw ConfigError("privileged value '" + p.privileged + "' is not a level of '" + p.name +
                        "'");
    }
  }
  if (outcome_) {
    if (!find(outcome_->name)) {
      throw ConfigError("outcome '" + outcome_->name + "' is not a feature");
    }
    if (output_space_.empty()) {
      throw ConfigError("schema with an outcome needs a nonempty output space");
    }
    if (!output_space_.contains(outcome_->favorable)) {
      throw ConfigError("favorable outcome '" + outcome_->favorable +
                        "' is not in the output space");
    }
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const
{
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const
{
  if (const auto idx = find(name)) {
    return *idx;
  }
  throw ConfigError("unknown feature '" + std::string(name) + "'");
}

std::vector<std::string> Schema::input_features() const
{
  std::vector<std::string> names;
  for (const auto& f : features_) {
    if (f.role == FeatureRole::kInput) {
      names.push_back(f.name);
    }
  }
  return names;
}

const ProtectedAttribute* Schema::protected_attribute(std::string_view name) const
{
  for (const auto& p : protected_) {
    if (p.name == name) {
      return &p;
    }
  }
  return nullptr;
}

}  // namespace lam
