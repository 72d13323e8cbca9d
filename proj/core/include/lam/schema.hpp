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

#ifndef LAM_SCHEMA_HPP_
#define LAM_SCHEMA_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lam
{

enum class FeatureKind
{
  kBinary,
  kCategorical,
  kOrdinal,  ///< integer valued
};

/// Input features enter encodings and similarity; the outcome and auxiliary
/// columns ride along for metrics and rules but are never encoded.
enum class FeatureRole
{
  kInput,
  kOutcome,
  kAuxiliary,
};

std::string_view to_string(FeatureKind kind);
std::string_view to_string(FeatureRole role);
FeatureKind parse_feature_kind(std::string_view text);

struct Feature
{
  std::string name;
  FeatureKind kind = FeatureKind::kCategorical;
  FeatureRole role = FeatureRole::kInput;
  /// Declared value set. Empty means "whatever the data holds" (raw schemas).
  std::vector<std::string> levels;

  bool operator==(const Feature&) const = default;
};

struct ProtectedAttribute
{
  std::string name;
  std::string privileged;

  bool operator==(const ProtectedAttribute&) const = default;
};

struct OutcomeSpec
{
  std::string name;
  std::string favorable;

  bool operator==(const OutcomeSpec&) const = default;
};

enum class OutputSpaceKind
{
  kBinary,
  kDecile,
  kCustom,
};

/// Finite, nonempty set of labels a classifier or auditor may emit.
class OutputSpace
{
public:
  OutputSpace() = default;
  explicit OutputSpace(std::vector<std::string> labels);

  static OutputSpace decile();

  OutputSpaceKind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool empty() const { return labels_.empty(); }
  bool contains(std::string_view label) const;

  bool operator==(const OutputSpace&) const = default;

private:
  OutputSpaceKind kind_ = OutputSpaceKind::kCustom;
  std::vector<std::string> labels_;
};

/// Column layout plus the fairness designations (protected attributes,
/// outcome, output space). A raw schema used for CSV ingestion carries only
/// features.
class Schema
{
public:
  Schema() = default;
  /// Throws ConfigError when an invariant is violated.
  Schema(std::vector<Feature> features, std::vector<ProtectedAttribute> protected_attributes = {},
         std::optional<OutcomeSpec> outcome = std::nullopt, OutputSpace output_space = {});

  const std::vector<Feature>& features() const { return features_; }
  const std::vector<ProtectedAttribute>& protected_attributes() const { return protected_; }
  const std::optional<OutcomeSpec>& outcome() const { return outcome_; }
  const OutputSpace& output_space() const { return output_space_; }

  std::size_t size() const { return features_.size(); }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws ConfigError when absent.
  std::size_t index_of(std::string_view name) const;
  const Feature& feature(std::string_view name) const { return features_[index_of(name)]; }

  /// Names of input-role features in declaration order.
  std::vector<std::string> input_features() const;
  const ProtectedAttribute* protected_attribute(std::string_view name) const;

  bool operator==(const Schema&) const = default;

private:
  std::vector<Feature> features_;
  std::vector<ProtectedAttribute> protected_;
  std::optional<OutcomeSpec> outcome_;
  OutputSpace output_space_;
};

}  // namespace lam

#endif  // LAM_SCHEMA_HPP_
