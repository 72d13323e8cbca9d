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


// Auditor models: three classifier families fitted to an auditor's
// feedback, plus the per-auditor batch fit behind the accuracy histogram and
// the notion-preference table.

#ifndef LAM_LEARNING_HPP_
#define LAM_LEARNING_HPP_

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/group_metrics.hpp"

namespace lam
{

enum class ModelFamily
{
  kLogistic,
  kTree,
  kLinearSvm,
};

inline constexpr std::array<ModelFamily, 3> kAllFamilies = {
    ModelFamily::kLogistic, ModelFamily::kTree, ModelFamily::kLinearSvm};

/// "logistic-regression", "decision-tree", "linear-svm".
std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view text);

/// Feature matrix with one label per row.
struct ExampleSet
{
  Eigen::MatrixXd features;
  std::vector<std::string> labels;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  /// Rows in the given order.
  ExampleSet subset(std::span<const std::size_t> rows) const;
};

/// Rows of an encoded table paired with labels. When `extra_column` names a
/// table column with numeric values it is appended as one more feature
/// (used to learn verdicts, which depend on the system label as well).
ExampleSet make_examples(const DataTable& encoded, std::span<const std::size_t> rows,
                         std::span<const std::string> labels,
                         const std::optional<std::string>& extra_column = std::nullopt);

struct LogisticConfig
{
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;

  bool operator==(const LogisticConfig&) const = default;
};

struct TreeConfig
{
  std::size_t max_depth = 8;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 0;

  bool operator==(const TreeConfig&) const = default;
};

struct SvmConfig
{
  double lambda = 0.01;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;

  bool operator==(const SvmConfig&) const = default;
};

struct LearningConfig
{
  LogisticConfig logistic;
  TreeConfig tree;
  SvmConfig svm;
  std::size_t min_examples = 10;
  double well_predicted = 0.8;  ///< accuracy strictly above this counts
  ModelFamily preference_family = ModelFamily::kLogistic;
  double notion_delta = 0.05;  ///< default delta for notion_preference pairs

  bool operator==(const LearningConfig&) const = default;
};

/// `key = value` lines, `#` comments. Unknown keys throw ConfigError.
LearningConfig parse_learning_config(std::string_view text);
LearningConfig load_learning_config(const std::filesystem::path& path);
std::string to_text(const LearningConfig& config);

/// Split `x[feature] <= threshold` goes left. Leaves have feature == -1.
struct TreeNode
{
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::string label;

  bool leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TrainingMetadata
{
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  double lambda = 0.0;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 0;
  std::size_t examples = 0;
  std::vector<double> loss_curve;  ///< one value per epoch
  double margin = 0.0;             ///< linear SVM only: 1 / |w|
  std::string warning;             ///< nonempty for degenerate fits

  bool operator==(const TrainingMetadata&) const = default;
};

struct LearnedModel
{
  ModelFamily family = ModelFamily::kLogistic;
  std::vector<std::string> feature_order;
  /// Observed classes in label order. Linear models score labels[1]
  /// positive.
  std::vector<std::string> labels;
  Eigen::VectorXd weights;
  double bias = 0.0;
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root
  std::optional<std::string> constant;
  TrainingMetadata meta;

  std::string predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  std::vector<std::string> predict_all(const Eigen::MatrixXd& rows) const;
  std::size_t depth() const;

  bool operator==(const LearnedModel& other) const;
};

/// Full-batch gradient descent on mean log-loss from zero weights. Needs
/// at most two classes; one class gives a constant model with a warning.
LearnedModel train_logistic(const ExampleSet& examples, const LogisticConfig& config = {});
/// CART with Gini impurity. An impure node is split even when no split
/// lowers the impurity, so consistent data is fitted exactly at unlimited
/// depth. Ties go to the lowest feature index, then the lowest threshold;
/// leaves take the majority label with ties to the smaller label.
LearnedModel train_tree(const ExampleSet& examples, const TreeConfig& config = {});
/// Pegasos subgradient descent on the L2-regularised hinge loss, with the
/// bias as a constant feature. Rows are visited in a seeded shuffled order.
LearnedModel train_linear_svm(const ExampleSet& examples, const SvmConfig& config = {});
LearnedModel train(ModelFamily family, const ExampleSet& examples, const LearningConfig& config);

/// Largest learning rate for which gradient descent on the mean log-loss
/// cannot increase the loss: 4 / lambda_max(X^T X / n) with the bias column
/// included in X.
double logistic_stability_bound(const Eigen::MatrixXd& features);

/// Fraction of exact label matches. Throws ConfigError when empty.
double evaluate_accuracy(const LearnedModel& model, const ExampleSet& examples);

/// Plain-text parameter dump that round-trips exactly.
std::string to_text(const LearnedModel& model);
LearnedModel parse_model(std::string_view text);

struct AuditorFeedback
{
  std::string auditor;
  std::vector<RowId> rows;
  ExampleSet examples;
};

struct AuditorFit
{
  std::string auditor;
  std::size_t examples = 0;
  std::array<LearnedModel, 3> models;  ///< indexed like kAllFamilies
  std::array<double, 3> accuracy{};    ///< held-in
  ModelFamily best = ModelFamily::kLogistic;

  double accuracy_of(ModelFamily family) const { return accuracy[static_cast<std::size_t>(family)]; }
};

/// Auditors per accuracy band: ten bands [0, 0.1), ..., [0.9, 1.0].
struct AccuracyHistogram
{
  std::array<std::array<std::size_t, 10>, 3> counts{};  ///< [family][band]
  std::array<std::size_t, 3> above_threshold{};         ///< accuracy > threshold
  double threshold = 0.8;

  static std::size_t band(double accuracy);
};

struct SkippedAuditor
{
  std::string auditor;
  std::size_t examples = 0;
};

struct FitAllResult
{
  std::vector<AuditorFit> fits;  ///< input order, skipped auditors removed
  std::vector<SkippedAuditor> skipped;
  AccuracyHistogram histogram;
};

/// Fits all three families per auditor, in parallel across auditors.
/// Auditors with fewer than config.min_examples examples are skipped.
FitAllResult fit_all_auditors(std::span<const AuditorFeedback> feedback,
                              const LearningConfig& config = {}, unsigned threads = 0);

struct NotionPreferenceRow
{
  std::string attribute;
  std::size_t auditors = 0;
  /// Percentages for statistical parity, equal opportunity, calibration and
  /// "other". Each auditor is counted once, in that order of precedence.
  std::array<double, 4> percent{};
  std::array<std::size_t, 4> counts{};
};

/// Classifies each well-predicted auditor (accuracy of
/// config.preference_family above config.well_predicted) by the first
/// notion their responses satisfy at the pair's delta on their own rows.
/// Responses act as predictions and `truth_column` as ground truth.
std::vector<NotionPreferenceRow> notion_preference(std::span<const AuditorFit> fits,
                                                   std::span<const AuditorFeedback> feedback,
                                                   const DataTable& table,
                                                   std::span<const GroupPair> attributes,
                                                   std::string_view truth_column,
                                                   const LearningConfig& config = {});

/// Threshold band fitted to observed verdicts: every epsilon in (lo, hi]
/// makes `s = 1 iff distance >= epsilon` wrong on exactly `errors`
/// judgments, and no epsilon does better. hi is infinite when the data never
/// rules out larger thresholds.
struct EpsilonFit
{
  std::size_t examples = 0;
  std::size_t errors = 0;
  double lo = 0.0;
  double hi = 0.0;
  /// Bounded band, and both verdicts were observed.
  bool identifiable = false;
};

/// Distances come from the auditor's own labels when they were elicited, or
/// from a learned model of the auditor otherwise; verdicts alone cannot
/// place epsilon. Ties between equally good bands go to the smallest
/// threshold. Throws DataError on empty or mismatched input, negative or
/// non-finite distances and verdicts other than 0/1.
EpsilonFit fit_epsilon(std::span<const double> distances, std::span<const int> verdicts);

}  // namespace lam

#endif  // LAM_LEARNING_HPP_
