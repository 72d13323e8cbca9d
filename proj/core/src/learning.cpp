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


#include "lam/learning.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "lam/error.hpp"
#include "lam/random.hpp"
#include "lam/text.hpp"

namespace lam
{
namespace
{

/// Distinct labels in label order.
std::vector<std::string> classes_of(const std::vector<std::string>& labels)
{
  std::vector<std::string> classes = labels;
  std::sort(classes.begin(), classes.end(),
            [](const std::string& a, const std::string& b) { return text::label_less(a, b); });
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

void check_examples(const ExampleSet& examples, const char* who)
{
  if (examples.size() == 0) {
    throw ConfigError(std::string(who) + ": no examples");
  }
  if (static_cast<std::size_t>(examples.features.rows()) != examples.size()) {
    throw ConfigError(std::string(who) + ": feature rows and labels differ in count");
  }
}

LearnedModel base_model(ModelFamily family, const ExampleSet& examples)
{
  LearnedModel model;
  model.family = family;
  model.feature_order = examples.feature_names;
  if (model.feature_order.empty()) {
    for (Eigen::Index c = 0; c < examples.features.cols(); ++c) {
      model.feature_order.push_back("x" + std::to_string(c));
    }
  }
  model.labels = classes_of(examples.labels);
  model.meta.examples = examples.size();
  return model;
}

/// Returns true (and fills the model) when the labels hold a single class.
bool constant_fit(LearnedModel& model)
{
  if (model.labels.size() != 1) {
    return false;
  }
  model.constant = model.labels.front();
  model.meta.warning = "single-class data; constant model";
  return true;
}

void require_binary(const LearnedModel& model, const char* who)
{
  if (model.labels.size() > 2) {
    throw ConfigError(std::string(who) + " needs binary labels, got " +
                      std::to_string(model.labels.size()) + " classes");
  }
}

Eigen::VectorXd signed_targets(const ExampleSet& examples, const std::string& positive,
                               double negative_value)
{
  Eigen::VectorXd y(static_cast<Eigen::Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = examples.labels[i] == positive ? 1.0 : negative_value;
  }
  return y;
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

double sigmoid(double z)
{
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct TreeBuilder
{
  const Eigen::MatrixXd& x;
  std::vector<std::size_t> label_class;  ///< per example
  std::size_t n_classes = 0;
  const TreeConfig& config;
  std::vector<TreeNode>& nodes;
  const std::vector<std::string>& classes;

  std::vector<std::size_t> counts(const std::vector<std::size_t>& rows) const
  {
    std::vector<std::size_t> c(n_classes, 0);
    for (const auto r : rows) {
      ++c[label_class[r]];
    }
    return c;
  }

  static double purity(const std::vector<std::size_t>& c, std::size_t n)
  {
    double s = 0.0;
    for (const auto k : c) {
      s += static_cast<double>(k) * static_cast<double>(k);
    }
    return n == 0 ? 0.0 : s / static_cast<double>(n);
  }

  int build(std::vector<std::size_t> rows, std::size_t depth)
  {
    const auto c = counts(rows);
    const auto majority = static_cast<std::size_t>(
        std::max_element(c.begin(), c.end()) - c.begin());  // first max = smaller label
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{-1, 0.0, -1, -1, classes[majority]});

    const bool pure = c[majority] == rows.size();
    const bool depth_left = config.max_depth == 0 || depth < config.max_depth;
    if (pure || !depth_left || rows.size() < 2 * std::max<std::size_t>(config.min_leaf, 1)) {
      return id;
    }

    // Maximising sum_k c_k^2 / n over both children minimises weighted Gini.
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = -1.0;
    const std::size_t min_leaf = std::max<std::size_t>(config.min_leaf, 1);
    std::vector<std::size_t> order = rows;
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x(static_cast<Eigen::Index>(a), f) < x(static_cast<Eigen::Index>(b), f);
      });
      std::vector<std::size_t> left(n_classes, 0);
      std::vector<std::size_t> right = c;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        ++left[label_class[order[i]]];
        --right[label_class[order[i]]];
        const double here = x(static_cast<Eigen::Index>(order[i]), f);
        const double next = x(static_cast<Eigen::Index>(order[i + 1]), f);
        const std::size_t n_left = i + 1;
        const std::size_t n_right = order.size() - n_left;
        if (here == next || n_left < min_leaf || n_right < min_leaf) {
          continue;
        }
        const double score = purity(left, n_left) + purity(right, n_right);
        if (score > best_score + 1e-12) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = here + (next - here) / 2.0;
        }
      }
    }
    if (best_feature < 0) {
      return id;
    }
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (const auto r : rows) {
      (x(static_cast<Eigen::Index>(r), best_feature) <= best_threshold ? left_rows : right_rows)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left_id = build(std::move(left_rows), depth + 1);
    const int right_id = build(std::move(right_rows), depth + 1);
    auto& node = nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = right_id;
    node.label.clear();
    return id;
  }
};

std::size_t subtree_depth(const std::vector<TreeNode>& nodes, int id)
{
  const auto& node = nodes[static_cast<std::size_t>(id)];
  if (node.leaf()) {
    return 0;
  }
  return 1 + std::max(subtree_depth(nodes, node.left), subtree_depth(nodes, node.right));
}

std::string join_doubles(const Eigen::VectorXd& v)
{
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += (i == 0 ? "" : " ") + text::format_double(v(i));
  }
  return out;
}

double need_double(const std::string& word, const char* what)
{
  const auto v = text::parse_double(word);
  if (!v) {
    throw ConfigError(std::string("model text: bad ") + what + " '" + word + "'");
  }
  return *v;
}

std::int64_t need_int(const std::string& word, const char* what)
{
  const auto v = text::parse_int(word);
  if (!v) {
    throw ConfigError(std::string("model text: bad ") + what + " '" + word + "'");
  }
  return *v;
}

}  // namespace

std::string_view to_string(ModelFamily family)
{
  switch (family) {
    case ModelFamily::kLogistic:
      return "logistic-regression";
    case ModelFamily::kTree:
      return "decision-tree";
    case ModelFamily::kLinearSvm:
      return "linear-svm";
  }
  return "?";
}

ModelFamily parse_model_family(std::string_view text)
{
  for (const auto f : kAllFamilies) {
    if (to_string(f) == text) {
      return f;
    }
  }
  if (text == "logistic") {
    return ModelFamily::kLogistic;
  }
  if (text == "tree") {
    return ModelFamily::kTree;
  }
  if (text == "svm") {
    return ModelFamily::kLinearSvm;
  }
  throw ConfigError("unknown model family '" + std::string(text) + "'");
}

ExampleSet ExampleSet::subset(std::span<const std::size_t> rows) const
{
  ExampleSet out;
  out.feature_names = feature_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

ExampleSet make_examples(const DataTable& encoded, std::span<const std::size_t> rows,
                         std::span<const std::string> labels,
                         const std::optional<std::string>& extra_column)
{
  const auto* view = encoded.encoded();
  if (view == nullptr) {
    throw ConfigError("make_examples: table has no encoded view");
  }
  if (labels.size() != rows.size()) {
    throw ConfigError("make_examples: " + std::to_string(labels.size()) + " labels for " +
                      std::to_string(rows.size()) + " rows");
  }
  const std::vector<std::string>* extra = extra_column ? &encoded.column(*extra_column) : nullptr;
  const auto width = view->matrix.cols() + (extra ? 1 : 0);
  ExampleSet out;
  out.feature_names = view->column_names;
  if (extra) {
    out.feature_names.push_back(*extra_column);
  }
  out.features.resize(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    if (rows[i] >= encoded.rows()) {
      throw ConfigError("make_examples: row index out of range");
    }
    out.features.row(static_cast<Eigen::Index>(i)).head(view->matrix.cols()) = view->matrix.row(r);
    if (extra) {
      const auto v = text::parse_double((*extra)[rows[i]]);
      if (!v) {
        throw DataError("column '" + *extra_column + "' value '" + (*extra)[rows[i]] +
                        "' is not numeric");
      }
      out.features(static_cast<Eigen::Index>(i), width - 1) = *v;
    }
  }
  out.labels.assign(labels.begin(), labels.end());
  return out;
}

LearningConfig parse_learning_config(std::string_view source)
{
  LearningConfig config;
  std::istringstream in{std::string(source)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = text::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(text::trim(body.substr(0, eq)));
    const std::string value(text::trim(body.substr(eq + 1)));
    auto real = [&]() {
      const auto v = text::parse_double(value);
      if (!v || *v < 0.0) {
        throw ConfigError("config line " + std::to_string(line_no) + ": '" + key +
                          "' needs a nonnegative number");
      }
      return *v;
    };
    auto count = [&]() {
      const auto v = text::parse_int(value);
      if (!v || *v < 0) {
        throw ConfigError("config line " + std::to_string(line_no) + ": '" + key +
                          "' needs a nonnegative integer");
      }
      return static_cast<std::size_t>(*v);
    };
    if (key == "logistic.learning_rate") {
      config.logistic.learning_rate = real();
    } else if (key == "logistic.epochs") {
      config.logistic.epochs = count();
    } else if (key == "tree.max_depth") {
      config.tree.max_depth = count();
    } else if (key == "tree.min_leaf") {
      config.tree.min_leaf = count();
    } else if (key == "svm.lambda") {
      config.svm.lambda = real();
    } else if (key == "svm.epochs") {
      config.svm.epochs = count();
    } else if (key == "seed") {
      const auto seed = static_cast<std::uint64_t>(count());
      config.logistic.seed = config.tree.seed = config.svm.seed = seed;
    } else if (key == "min_examples") {
      config.min_examples = count();
    } else if (key == "well_predicted") {
      config.well_predicted = real();
    } else if (key == "preference_family") {
      config.preference_family = parse_model_family(value);
    } else if (key == "notion_delta") {
      config.notion_delta = real();
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

LearningConfig load_learning_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_learning_config(buffer.str());
}

std::string to_text(const LearningConfig& config)
{
  std::ostringstream out;
  out << "logistic.learning_rate = " << text::format_double(config.logistic.learning_rate) << '\n'
      << "logistic.epochs = " << config.logistic.epochs << '\n'
      << "tree.max_depth = " << config.tree.max_depth << '\n'
      << "tree.min_leaf = " << config.tree.min_leaf << '\n'
      << "svm.lambda = " << text::format_double(config.svm.lambda) << '\n'
      << "svm.epochs = " << config.svm.epochs << '\n'
      << "seed = " << config.logistic.seed << '\n'
      << "min_examples = " << config.min_examples << '\n'
      << "well_predicted = " << text::format_double(config.well_predicted) << '\n'
      << "preference_family = " << to_string(config.preference_family) << '\n'
      << "notion_delta = " << text::format_double(config.notion_delta) << '\n';
  return out.str();
}

std::string LearnedModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const
{
  if (constant) {
    return *constant;
  }
  if (static_cast<std::size_t>(x.size()) != feature_order.size()) {
    throw ConfigError("predict: input has " + std::to_string(x.size()) + " features, model has " +
                      std::to_string(feature_order.size()));
  }
  if (family == ModelFamily::kTree) {
    std::size_t id = 0;
    while (!nodes[id].leaf()) {
      const auto& node = nodes[id];
      id = static_cast<std::size_t>(x(node.feature) <= node.threshold ? node.left : node.right);
    }
    return nodes[id].label;
  }
  const double z = weights.dot(x) + bias;
  return z >= 0.0 ? labels[1] : labels[0];
}

std::vector<std::string> LearnedModel::predict_all(const Eigen::MatrixXd& rows) const
{
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out.push_back(predict(rows.row(r).transpose()));
  }
  return out;
}

std::size_t LearnedModel::depth() const
{
  return nodes.empty() ? 0 : subtree_depth(nodes, 0);
}

bool LearnedModel::operator==(const LearnedModel& other) const
{
  const bool same_weights =
      weights.size() == other.weights.size() && (weights.size() == 0 || weights == other.weights);
  return family == other.family && feature_order == other.feature_order &&
         labels == other.labels && same_weights && bias == other.bias && nodes == other.nodes &&
         constant == other.constant && meta == other.meta;
}

double logistic_stability_bound(const Eigen::MatrixXd& features)
{
  const auto n = features.rows();
  if (n == 0) {
    throw ConfigError("logistic_stability_bound: no rows");
  }
  Eigen::MatrixXd x(n, features.cols() + 1);
  x << features, Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd gram = (x.transpose() * x) / static_cast<double>(n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return 4.0 / solver.eigenvalues().maxCoeff();
}

LearnedModel train_logistic(const ExampleSet& examples, const LogisticConfig& config)
{
  check_examples(examples, "train_logistic");
  LearnedModel model = base_model(ModelFamily::kLogistic, examples);
  require_binary(model, "train_logistic");
  model.meta.seed = config.seed;
  model.meta.epochs = config.epochs;
  model.meta.learning_rate = config.learning_rate;
  const auto d = examples.features.cols();
  model.weights = Eigen::VectorXd::Zero(d);
  if (constant_fit(model)) {
    return model;
  }
  const auto& x = examples.features;
  const Eigen::VectorXd y = signed_targets(examples, model.labels[1], 0.0);
  const double n = static_cast<double>(examples.size());
  Eigen::VectorXd z(x.rows());
  Eigen::VectorXd residual(x.rows());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    z.noalias() = x * model.weights;
    z.array() += model.bias;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      residual(i) = sigmoid(z(i)) - y(i);
    }
    model.weights.noalias() -= (config.learning_rate / n) * (x.transpose() * residual);
    model.bias -= config.learning_rate * residual.sum() / n;

    z.noalias() = x * model.weights;
    z.array() += model.bias;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      loss += softplus(z(i)) - y(i) * z(i);
    }
    model.meta.loss_curve.push_back(loss / n);
  }
  return model;
}

LearnedModel train_tree(const ExampleSet& examples, const TreeConfig& config)
{
  check_examples(examples, "train_tree");
  LearnedModel model = base_model(ModelFamily::kTree, examples);
  model.meta.seed = config.seed;
  model.meta.max_depth = config.max_depth;
  model.meta.min_leaf = config.min_leaf;
  std::unordered_map<std::string, std::size_t> class_index;
  for (std::size_t k = 0; k < model.labels.size(); ++k) {
    class_index[model.labels[k]] = k;
  }
  TreeBuilder builder{examples.features, {}, model.labels.size(), config, model.nodes, model.labels};
  builder.label_class.reserve(examples.size());
  for (const auto& label : examples.labels) {
    builder.label_class.push_back(class_index.at(label));
  }
  std::vector<std::size_t> rows(examples.size());
  std::iota(rows.begin(), rows.end(), 0);
  builder.build(std::move(rows), 0);
  if (model.labels.size() == 1) {
    model.constant = model.labels.front();
    model.meta.warning = "single-class data; constant model";
  }
  return model;
}

LearnedModel train_linear_svm(const ExampleSet& examples, const SvmConfig& config)
{
  check_examples(examples, "train_linear_svm");
  if (!(config.lambda > 0.0)) {
    throw ConfigError("train_linear_svm: lambda must be positive");
  }
  LearnedModel model = base_model(ModelFamily::kLinearSvm, examples);
  require_binary(model, "train_linear_svm");
  model.meta.seed = config.seed;
  model.meta.epochs = config.epochs;
  model.meta.lambda = config.lambda;
  const auto d = examples.features.cols();
  model.weights = Eigen::VectorXd::Zero(d);
  if (constant_fit(model)) {
    return model;
  }
  const auto n = static_cast<Eigen::Index>(examples.size());
  Eigen::MatrixXd x(n, d + 1);
  x << examples.features, Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd y = signed_targets(examples, model.labels[1], -1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  Rng rng(config.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (const auto i : order) {
      ++t;
      const double eta = 1.0 / (config.lambda * static_cast<double>(t));
      const bool active = y(i) * w.dot(x.row(i)) < 1.0;
      w *= 1.0 - eta * config.lambda;
      if (active) {
        w.noalias() += (eta * y(i)) * x.row(i).transpose();
      }
    }
    const Eigen::VectorXd margins = (x * w).cwiseProduct(y);
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      hinge += std::max(0.0, 1.0 - margins(i));
    }
    model.meta.loss_curve.push_back(0.5 * config.lambda * w.squaredNorm() +
                                    hinge / static_cast<double>(n));
  }
  model.weights = w.head(d);
  model.bias = w(d);
  const double norm = model.weights.norm();
  model.meta.margin = norm > 0.0 ? 1.0 / norm : 0.0;
  return model;
}

LearnedModel train(ModelFamily family, const ExampleSet& examples, const LearningConfig& config)
{
  switch (family) {
    case ModelFamily::kLogistic:
      return train_logistic(examples, config.logistic);
    case ModelFamily::kTree:
      return train_tree(examples, config.tree);
    case ModelFamily::kLinearSvm:
      return train_linear_svm(examples, config.svm);
  }
  throw ConfigError("unknown model family");
}

double evaluate_accuracy(const LearnedModel& model, const ExampleSet& examples)
{
  if (examples.size() == 0) {
    throw ConfigError("evaluate_accuracy: no examples");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    hits += model.predict(examples.features.row(static_cast<Eigen::Index>(i)).transpose()) ==
                    examples.labels[i]
                ? 1
                : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

std::string to_text(const LearnedModel& model)
{
  std::ostringstream out;
  out << "lam-model 1\n";
  out << "family " << to_string(model.family) << '\n';
  out << "features";
  for (const auto& f : model.feature_order) {
    out << ' ' << text::quote_if_needed(f);
  }
  out << "\nlabels";
  for (const auto& l : model.labels) {
    out << ' ' << text::quote_if_needed(l);
  }
  out << '\n';
  if (model.constant) {
    out << "constant " << text::quote_if_needed(*model.constant) << '\n';
  }
  if (model.family != ModelFamily::kTree) {
    out << "weights " << join_doubles(model.weights) << '\n';
    out << "bias " << text::format_double(model.bias) << '\n';
  }
  for (const auto& node : model.nodes) {
    if (node.leaf()) {
      out << "leaf " << text::quote_if_needed(node.label) << '\n';
    } else {
      out << "split " << node.feature << ' ' << text::format_double(node.threshold) << ' '
          << node.left << ' ' << node.right << '\n';
    }
  }
  const auto& m = model.meta;
  out << "seed " << m.seed << '\n'
      << "epochs " << m.epochs << '\n'
      << "learning_rate " << text::format_double(m.learning_rate) << '\n'
      << "lambda " << text::format_double(m.lambda) << '\n'
      << "max_depth " << m.max_depth << '\n'
      << "min_leaf " << m.min_leaf << '\n'
      << "examples " << m.examples << '\n'
      << "margin " << text::format_double(m.margin) << '\n';
  if (!m.warning.empty()) {
    out << "warning " << text::quote_if_needed(m.warning) << '\n';
  }
  out << "loss";
  for (const double v : m.loss_curve) {
    out << ' ' << text::format_double(v);
  }
  out << '\n';
  return out.str();
}

LearnedModel parse_model(std::string_view source)
{
  LearnedModel model;
  std::istringstream in{std::string(source)};
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const auto words = text::tokenize(line);
    if (words.empty()) {
      continue;
    }
    const auto& key = words[0];
    const std::span<const std::string> args(words.data() + 1, words.size() - 1);
    auto one = [&]() -> const std::string& {
      if (args.size() != 1) {
        throw ConfigError("model text: '" + key + "' takes one value");
      }
      return args[0];
    };
    if (key == "lam-model") {
      if (args.size() != 1 || args[0] != "1") {
        throw ConfigError("model text: unsupported version");
      }
      header = true;
    } else if (key == "family") {
      model.family = parse_model_family(one());
    } else if (key == "features") {
      for (const auto& a : args) {
        model.feature_order.push_back(text::unquote(a));
      }
    } else if (key == "labels") {
      for (const auto& a : args) {
        model.labels.push_back(text::unquote(a));
      }
    } else if (key == "constant") {
      model.constant = text::unquote(one());
    } else if (key == "weights") {
      model.weights.resize(static_cast<Eigen::Index>(args.size()));
      for (std::size_t i = 0; i < args.size(); ++i) {
        model.weights(static_cast<Eigen::Index>(i)) = need_double(args[i], "weight");
      }
    } else if (key == "bias") {
      model.bias = need_double(one(), "bias");
    } else if (key == "leaf") {
      model.nodes.push_back(TreeNode{-1, 0.0, -1, -1, text::unquote(one())});
    } else if (key == "split") {
      if (args.size() != 4) {
        throw ConfigError("model text: 'split' takes feature threshold left right");
      }
      model.nodes.push_back(TreeNode{static_cast<int>(need_int(args[0], "feature")),
                                     need_double(args[1], "threshold"),
                                     static_cast<int>(need_int(args[2], "child")),
                                     static_cast<int>(need_int(args[3], "child")), ""});
    } else if (key == "seed") {
      model.meta.seed = static_cast<std::uint64_t>(need_int(one(), "seed"));
    } else if (key == "epochs") {
      model.meta.epochs = static_cast<std::size_t>(need_int(one(), "epochs"));
    } else if (key == "learning_rate") {
      model.meta.learning_rate = need_double(one(), "learning rate");
    } else if (key == "lambda") {
      model.meta.lambda = need_double(one(), "lambda");
    } else if (key == "max_depth") {
      model.meta.max_depth = static_cast<std::size_t>(need_int(one(), "depth"));
    } else if (key == "min_leaf") {
      model.meta.min_leaf = static_cast<std::size_t>(need_int(one(), "min leaf"));
    } else if (key == "examples") {
      model.meta.examples = static_cast<std::size_t>(need_int(one(), "examples"));
    } else if (key == "margin") {
      model.meta.margin = need_double(one(), "margin");
    } else if (key == "warning") {
      model.meta.warning = text::unquote(one());
    } else if (key == "loss") {
      for (const auto& a : args) {
        model.meta.loss_curve.push_back(need_double(a, "loss"));
      }
    } else {
      throw ConfigError("model text: unknown key '" + key + "'");
    }
  }
  if (!header) {
    throw ConfigError("model text: missing 'lam-model' header");
  }
  if (model.family != ModelFamily::kTree && !model.constant &&
      static_cast<std::size_t>(model.weights.size()) != model.feature_order.size()) {
    throw ConfigError("model text: weight count does not match feature count");
  }
  if (model.family != ModelFamily::kTree && !model.constant && model.labels.size() != 2) {
    throw ConfigError("model text: linear model needs two labels");
  }
  if (model.family == ModelFamily::kTree) {
    if (model.nodes.empty()) {
      throw ConfigError("model text: tree without nodes");
    }
    const auto count = static_cast<int>(model.nodes.size());
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
      const auto& node = model.nodes[i];
      if (node.leaf()) {
        continue;
      }
      const bool children_ok = node.left > static_cast<int>(i) && node.right > static_cast<int>(i) &&
                               node.left < count && node.right < count;
      if (!children_ok || static_cast<std::size_t>(node.feature) >= model.feature_order.size()) {
        throw ConfigError("model text: malformed tree node " + std::to_string(i));
      }
    }
  }
  return model;
}

std::size_t AccuracyHistogram::band(double accuracy)
{
  const auto b = static_cast<std::size_t>(std::floor(accuracy * 10.0 + 1e-9));
  return std::min<std::size_t>(b, 9);
}

FitAllResult fit_all_auditors(std::span<const AuditorFeedback> feedback,
                              const LearningConfig& config, unsigned threads)
{
  FitAllResult result;
  result.histogram.threshold = config.well_predicted;
  std::vector<const AuditorFeedback*> eligible;
  for (const auto& f : feedback) {
    if (f.examples.size() < config.min_examples) {
      result.skipped.push_back({f.auditor, f.examples.size()});
    } else {
      eligible.push_back(&f);
    }
  }
  result.fits.resize(eligible.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < eligible.size(); i = next++) {
      try {
        const auto& source = *eligible[i];
        AuditorFit fit;
        fit.auditor = source.auditor;
        fit.examples = source.examples.size();
        for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
          fit.models[k] = train(kAllFamilies[k], source.examples, config);
          fit.accuracy[k] = evaluate_accuracy(fit.models[k], source.examples);
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < kAllFamilies.size(); ++k) {
          if (fit.accuracy[k] > fit.accuracy[best]) {
            best = k;
          }
        }
        fit.best = kAllFamilies[best];
        result.fits[i] = std::move(fit);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(eligible.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  for (const auto& fit : result.fits) {
    for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
      ++result.histogram.counts[k][AccuracyHistogram::band(fit.accuracy[k])];
      result.histogram.above_threshold[k] += fit.accuracy[k] > config.well_predicted ? 1 : 0;
    }
  }
  return result;
}

std::vector<NotionPreferenceRow> notion_preference(std::span<const AuditorFit> fits,
                                                   std::span<const AuditorFeedback> feedback,
                                                   const DataTable& table,
                                                   std::span<const GroupPair> attributes,
                                                   std::string_view truth_column,
                                                   const LearningConfig& config)
{
  std::unordered_map<std::string, const AuditorFeedback*> by_auditor;
  for (const auto& f : feedback) {
    by_auditor[f.auditor] = &f;
  }
  const auto& truth_values = table.column(truth_column);

  std::vector<NotionPreferenceRow> rows;
  for (const auto& pair : attributes) {
    NotionPreferenceRow row;
    row.attribute = pair.attribute;
    for (const auto& fit : fits) {
      if (!(fit.accuracy_of(config.preference_family) > config.well_predicted)) {
        continue;
      }
      const auto found = by_auditor.find(fit.auditor);
      if (found == by_auditor.end()) {
        throw ConfigError("notion_preference: no feedback for auditor '" + fit.auditor + "'");
      }
      const auto& source = *found->second;
      std::vector<std::size_t> indices;
      indices.reserve(source.rows.size());
      for (const auto id : source.rows) {
        const auto index = table.row_index(id);
        if (!index) {
          throw DataError("feedback names unknown row " + std::to_string(id));
        }
        indices.push_back(*index);
      }
      const auto subset = table.select_rows(indices);
      std::vector<std::string> truths;
      truths.reserve(indices.size());
      for (const auto i : indices) {
        truths.push_back(truth_values[i]);
      }
      const auto& responses = source.examples.labels;
      std::size_t category = 3;
      for (std::size_t k = 0; k < std::size(kAllNotions); ++k) {
        if (fairness_diff(kAllNotions[k], responses, truths, subset, pair).satisfied) {
          category = k;
          break;
        }
      }
      ++row.counts[category];
      ++row.auditors;
    }
    for (std::size_t k = 0; k < row.percent.size(); ++k) {
      row.percent[k] = row.auditors == 0 ? 0.0
                                         : 100.0 * static_cast<double>(row.counts[k]) /
                                               static_cast<double>(row.auditors);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EpsilonFit fit_epsilon(std::span<const double> distances, std::span<const int> verdicts)
{
  if (distances.size() != verdicts.size()) {
    throw DataError("fit_epsilon: distances and verdicts differ in length");
  }
  if (distances.empty()) {
    throw DataError("fit_epsilon: no judgments");
  }
  std::vector<std::pair<double, int>> points;
  points.reserve(distances.size());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (!std::isfinite(distances[i]) || distances[i] < 0.0) {
      throw DataError("fit_epsilon: bad distance " + text::format_double(distances[i]));
    }
    if (verdicts[i] != 0 && verdicts[i] != 1) {
      throw DataError("fit_epsilon: verdict must be 0 or 1");
    }
    ones += static_cast<std::size_t>(verdicts[i]);
    points.emplace_back(distances[i], verdicts[i]);
  }
  std::sort(points.begin(), points.end());

  // Sweep the candidate bands (0, b1], (b1, b2], ..., (bk, inf) over the
  // distinct positive distances. For epsilon in (b_{i-1}, b_i] a row is
  // called unfair exactly when its distance is >= b_i.
  EpsilonFit best;
  best.examples = points.size();
  best.errors = points.size() + 1;
  std::size_t below_ones = 0;   // s = 1 rows with distance < current edge
  std::size_t below_zeros = 0;  // s = 0 rows with distance < current edge
  const std::size_t zeros = points.size() - ones;
  double lo = 0.0;
  std::size_t i = 0;
  while (i < points.size() && points[i].first <= 0.0) {
    (points[i].second == 1 ? below_ones : below_zeros) += 1;
    ++i;
  }
  while (true) {
    const double hi = i < points.size() ? points[i].first : std::numeric_limits<double>::infinity();
    const std::size_t errors = below_ones + (zeros - below_zeros);
    if (errors < best.errors) {
      best.errors = errors;
      best.lo = lo;
      best.hi = hi;
    }
    if (i == points.size()) {
      break;
    }
    while (i < points.size() && points[i].first == hi) {
      (points[i].second == 1 ? below_ones : below_zeros) += 1;
      ++i;
    }
    lo = hi;
  }
  best.identifiable = std::isfinite(best.hi) && ones > 0 && zeros > 0;
  return best;
}

}  // namespace lam
