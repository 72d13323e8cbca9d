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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lam/encoding.hpp"
#include "lam/error.hpp"
#include "lam/feedback.hpp"
#include "lam/learning.hpp"
#include "lam/recipe.hpp"
#include "lam/rule.hpp"
#include "support/test_support.hpp"

namespace lam
{
namespace
{

ExampleSet make_set(const std::vector<std::vector<double>>& rows, std::vector<std::string> labels)
{
  ExampleSet s;
  s.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      s.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    s.feature_names.push_back("x" + std::to_string(c));
  }
  s.labels = std::move(labels);
  return s;
}

/// Two clouds either side of the line x0 + x1 = 0 with margin at least 1.
ExampleSet separable(Rng& rng, std::size_t n)
{
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    const double t = rng.uniform(-2, 2);
    const double off = rng.uniform(1, 3) * (pos ? 1 : -1);
    rows.push_back({t + off, -t + off});
    labels.push_back(pos ? "b" : "a");
  }
  return make_set(rows, labels);
}

ExampleSet random_set(Rng& rng, std::size_t n, std::size_t d)
{
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) {
      v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    }
    labels[i] = rng.uniform() < 0.5 ? "0" : "1";
  }
  return make_set(rows, labels);
}

TEST(Logistic, SeparableSetIsFitExactly)
{
  Rng rng(1);
  const auto s = separable(rng, 60);
  EXPECT_EQ(evaluate_accuracy(train_logistic(s), s), 1.0);
}

TEST(Logistic, SingleClassGivesAConstantModelWithWarning)
{
  const auto s = make_set({{0, 1}, {1, 0}, {1, 1}}, {"z", "z", "z"});
  for (const auto family : kAllFamilies) {
    const auto m = train(family, s, {});
    ASSERT_TRUE(m.constant) << to_string(family);
    EXPECT_FALSE(m.meta.warning.empty());
    EXPECT_EQ(evaluate_accuracy(m, s), 1.0);
  }
}

TEST(Logistic, LossNeverRisesBelowTheStabilityBound)
{
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_set(rng, 10 + rng.index(60), 1 + rng.index(6));
    LogisticConfig c;
    c.learning_rate = logistic_stability_bound(s.features) * rng.uniform(0.1, 1.0);
    c.epochs = 200;
    const auto m = train_logistic(s, c);
    if (m.constant) {
      continue;
    }
    const auto& loss = m.meta.loss_curve;
    ASSERT_EQ(loss.size(), c.epochs);
    for (std::size_t e = 1; e < loss.size(); ++e) {
      EXPECT_LE(loss[e], loss[e - 1] + 1e-12) << "trial " << trial << " epoch " << e;
    }
  }
}

TEST(Tree, ConsistentDataIsShatteredAtUnlimitedDepth)
{
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    // Labels as a random function of the (deduplicated) row.
    auto s = random_set(rng, 5 + rng.index(80), 1 + rng.index(5));
    std::map<std::vector<double>, std::string> f;
    for (Eigen::Index r = 0; r < s.features.rows(); ++r) {
      const Eigen::VectorXd row = s.features.row(r);
      const std::vector<double> key(row.data(), row.data() + row.size());
      s.labels[static_cast<std::size_t>(r)] = f.try_emplace(key, rng.uniform() < 0.5 ? "0" : "1").first->second;
    }
    TreeConfig c;
    c.max_depth = 0;
    EXPECT_EQ(evaluate_accuracy(train_tree(s, c), s), 1.0);
  }
}

TEST(Tree, ConflictingDuplicatesTakeTheMajorityWithTiesToTheSmallerLabel)
{
  const auto majority = make_set({{1}, {1}, {1}}, {"b", "a", "b"});
  EXPECT_EQ(train_tree(majority).predict(Eigen::VectorXd::Ones(1)), "b");
  const auto tie = make_set({{1}, {1}, {1}, {1}}, {"b", "a", "b", "a"});
  EXPECT_EQ(train_tree(tie).predict(Eigen::VectorXd::Ones(1)), "a");
}

// Best stump accuracy found by trying every feature, threshold and leaf
// labelling.
double best_stump(const ExampleSet& s)
{
  double best = 0.0;
  const std::vector<std::string> labels{"0", "1"};
  for (Eigen::Index f = 0; f < s.features.cols(); ++f) {
    for (const double t : {-0.5, 0.5, 1.5}) {
      for (const auto& left : labels) {
        for (const auto& right : labels) {
          std::size_t ok = 0;
          for (Eigen::Index r = 0; r < s.features.rows(); ++r) {
            const auto& p = s.features(r, f) <= t ? left : right;
            ok += p == s.labels[static_cast<std::size_t>(r)] ? 1 : 0;
          }
          best = std::max(best, static_cast<double>(ok) / static_cast<double>(s.size()));
        }
      }
    }
  }
  return best;
}

TEST(Tree, DepthOneCannotLearnXor)
{
  const auto xor4 = make_set({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 1}}, {"0", "1", "1", "0", "0"});
  TreeConfig c;
  c.max_depth = 1;
  const auto m = train_tree(xor4, c);
  EXPECT_LE(m.depth(), 1u);
  const double acc = evaluate_accuracy(m, xor4);
  EXPECT_LE(acc, best_stump(xor4));
  EXPECT_LE(acc, 0.75);
  c.max_depth = 2;
  EXPECT_EQ(evaluate_accuracy(train_tree(xor4, c), xor4), 1.0);
}

TEST(Svm, SeparableSetIsFitExactly)
{
  Rng rng(4);
  const auto s = separable(rng, 60);
  const auto m = train_linear_svm(s);
  EXPECT_EQ(evaluate_accuracy(m, s), 1.0);
  EXPECT_GT(m.meta.margin, 0.0);
}

TEST(Svm, FlippedLabelsNegateTheWeights)
{
  Rng rng(5);
  const auto s = separable(rng, 40);
  auto flipped = s;
  for (auto& l : flipped.labels) {
    l = l == "a" ? "b" : "a";
  }
  const auto m = train_linear_svm(s);
  const auto n = train_linear_svm(flipped);
  ASSERT_EQ(m.labels, n.labels);
  EXPECT_TRUE(m.weights.isApprox(-n.weights, 1e-6) || (m.weights + n.weights).norm() < 1e-6);
  EXPECT_NEAR(m.bias, -n.bias, 1e-6);
}

TEST(Training, SameSeedGivesIdenticalModels)
{
  Rng rng(6);
  const auto s = random_set(rng, 80, 4);
  for (const auto family : kAllFamilies) {
    LearningConfig c;
    c.svm.seed = c.tree.seed = c.logistic.seed = 17;
    const auto a = train(family, s, c);
    const auto b = train(family, s, c);
    EXPECT_EQ(a, b) << to_string(family);
    EXPECT_EQ(to_text(a), to_text(b));
  }
}

TEST(Training, ModelTextRoundTrips)
{
  Rng rng(7);
  const auto s = random_set(rng, 50, 3);
  for (const auto family : kAllFamilies) {
    const auto m = train(family, s, {});
    const auto parsed = parse_model(to_text(m));
    EXPECT_EQ(parsed, m) << to_string(family);
    EXPECT_EQ(parsed.predict_all(s.features), m.predict_all(s.features));
  }
  EXPECT_THROW(parse_model("not a model"), ConfigError);
}

TEST(Accuracy, MatchesANaiveLoop)
{
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto train_set = random_set(rng, 40, 3);
    const auto test_set = random_set(rng, 1 + rng.index(40), 3);
    const auto m = train(kAllFamilies[rng.index(3)], train_set, {});
    std::size_t ok = 0;
    for (Eigen::Index r = 0; r < test_set.features.rows(); ++r) {
      ok += m.predict(test_set.features.row(r).transpose()) == test_set.labels[static_cast<std::size_t>(r)];
    }
    EXPECT_EQ(evaluate_accuracy(m, test_set), static_cast<double>(ok) / static_cast<double>(test_set.size()));
  }
}

TEST(Accuracy, MemorisedTreeAndConstantModel)
{
  const auto s = make_set({{0}, {1}, {2}, {3}}, {"0", "1", "1", "0"});
  TreeConfig c;
  c.max_depth = 0;
  EXPECT_EQ(evaluate_accuracy(train_tree(s, c), s), 1.0);
  LearnedModel constant;
  constant.constant = "1";
  constant.labels = {"1"};
  constant.feature_order = {"x0"};
  EXPECT_EQ(evaluate_accuracy(constant, s), 0.5);
  EXPECT_THROW(evaluate_accuracy(constant, make_set({{0}}, {}).subset(std::vector<std::size_t>{})),
               ConfigError);
}

struct RecoveryCase
{
  std::string csv;
  std::string recipe;
  std::string rule;
};

// 500 training and 500 held-out rows drawn by a pinned shuffle.
double recovery_accuracy(const RecoveryCase& c)
{
  const auto d = load_dataset(test::data_path(c.csv), builtin_recipe(c.recipe));
  const auto encoded = one_hot_encode(d.table);
  const auto labels = evaluate_rule(builtin_rule(c.rule), d.table);
  std::vector<std::size_t> order(d.table.rows());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(2026);
  rng.shuffle(order);
  const std::vector<std::size_t> train_rows(order.begin(), order.begin() + 500);
  const std::vector<std::size_t> test_rows(order.begin() + 500, order.begin() + 1000);
  const auto pick = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::string> out;
    for (const auto r : rows) {
      out.push_back(labels[r]);
    }
    return make_examples(encoded, rows, out);
  };
  const auto model = train_tree(pick(train_rows));
  return evaluate_accuracy(model, pick(test_rows));
}

TEST(Recovery, TreeRecoversEveryShippedRule)
{
  for (const auto& c : {RecoveryCase{"compas.csv", "compas-binary", "f1"},
                        RecoveryCase{"german.csv", "german", "f2"},
                        RecoveryCase{"adult.csv", "adult", "f3"}}) {
    EXPECT_GE(recovery_accuracy(c), 0.95) << c.rule;
  }
}

std::vector<AuditorFeedback> rule_auditors(const DataTable& encoded, const std::vector<std::string>& labels,
                                           std::size_t auditors, std::size_t each, Rng& rng)
{
  std::vector<FeedbackRecord> records;
  for (std::size_t a = 0; a < auditors; ++a) {
    std::vector<std::size_t> order(encoded.rows());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < each; ++i) {
      records.push_back({"auditor" + std::to_string(a), encoded.id(order[i]), labels[order[i]]});
    }
  }
  return group_feedback(records, encoded);
}

TEST(FitAll, FiveRuleFollowersAreAllWellPredicted)
{
  const auto d = load_dataset(test::data_path("compas.csv"), builtin_recipe("compas-binary"));
  const auto encoded = one_hot_encode(d.table);
  Rng rng(9);
  auto feedback = rule_auditors(encoded, evaluate_rule(builtin_rule("f1"), d.table), 5, 200, rng);
  // A sixth auditor with three responses falls below min_examples.
  feedback.push_back(feedback.front());
  feedback.back().auditor = "brief";
  std::vector<std::size_t> three{0, 1, 2};
  feedback.back().examples = feedback.back().examples.subset(three);
  feedback.back().rows.resize(3);

  const auto result = fit_all_auditors(feedback);
  ASSERT_EQ(result.fits.size(), 5u);
  ASSERT_EQ(result.skipped.size(), 1u);
  EXPECT_EQ(result.skipped[0].auditor, "brief");
  EXPECT_EQ(result.skipped[0].examples, 3u);
  for (const auto& fit : result.fits) {
    EXPECT_GT(fit.accuracy_of(ModelFamily::kTree), 0.95) << fit.auditor;
    for (const double a : fit.accuracy) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
  }
  const auto tree = static_cast<std::size_t>(ModelFamily::kTree);
  EXPECT_EQ(result.histogram.above_threshold[tree], 5u);
  EXPECT_EQ(result.histogram.counts[tree][9], 5u);
  // Parallel and serial fits agree.
  const auto serial = fit_all_auditors(feedback, {}, 1);
  for (std::size_t i = 0; i < serial.fits.size(); ++i) {
    EXPECT_EQ(serial.fits[i].models, result.fits[i].models);
  }
}

TEST(Histogram, BandEdges)
{
  EXPECT_EQ(AccuracyHistogram::band(0.0), 0u);
  EXPECT_EQ(AccuracyHistogram::band(0.1), 1u);
  EXPECT_EQ(AccuracyHistogram::band(0.95), 9u);
  EXPECT_EQ(AccuracyHistogram::band(1.0), 9u);
}

// Labels depend only on u, and u is spread identically over both groups,
// so every auditor satisfies statistical parity at delta 0.
TEST(NotionPreference, ParityByConstructionIsAllStatisticalParity)
{
  std::vector<std::string> u;
  std::vector<std::string> a;
  std::vector<std::string> y;
  for (int rep = 0; rep < 10; ++rep) {
    for (const auto* group : {"p", "q"}) {
      for (const auto* value : {"x", "w", "v"}) {
        u.emplace_back(value);
        a.emplace_back(group);
        y.emplace_back(rep % 2 == 0 ? "1" : "0");
      }
    }
  }
  const auto table = test::make_table({{"u", u}, {"a", a}, {"y", y}});
  const auto encoded = one_hot_encode(table, {"u"});
  std::vector<FeedbackRecord> records;
  for (int aud = 0; aud < 4; ++aud) {
    for (std::size_t r = 0; r < table.rows(); ++r) {
      records.push_back({"aud" + std::to_string(aud), table.id(r), u[r] == "x" ? "1" : "0"});
    }
  }
  const auto feedback = group_feedback(records, encoded);
  LearningConfig config;
  const auto fits = fit_all_auditors(feedback, config).fits;
  const GroupPair pair{"a", "p", "q", "1", 0.0};
  const auto rows = notion_preference(fits, feedback, encoded, std::span<const GroupPair>(&pair, 1), "y",
                                      config);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].auditors, 4u);
  EXPECT_EQ(rows[0].percent[0], 100.0);
  EXPECT_NEAR(rows[0].percent[0] + rows[0].percent[1] + rows[0].percent[2] + rows[0].percent[3], 100.0, 0.1);
}

TEST(LearningConfig, ShippedFileMatchesCodeDefaults)
{
  EXPECT_EQ(load_learning_config(test::data_path("config/learning-defaults.conf")), LearningConfig{});
  LearningConfig c;
  c.tree.max_depth = 3;
  c.svm.lambda = 0.5;
  c.preference_family = ModelFamily::kLinearSvm;
  EXPECT_EQ(parse_learning_config(to_text(c)), c);
  EXPECT_THROW(parse_learning_config("no.such.key = 1\n"), ConfigError);
}

TEST(FitEpsilon, CleanVerdictsGiveTheBandBetweenClasses)
{
  const std::vector<double> d{0, 1, 2, 3, 4};
  const std::vector<int> s{0, 0, 1, 1, 1};
  const auto fit = fit_epsilon(d, s);
  EXPECT_EQ(fit.errors, 0u);
  EXPECT_EQ(fit.lo, 1.0);
  EXPECT_EQ(fit.hi, 2.0);
  EXPECT_TRUE(fit.identifiable);
}

TEST(FitEpsilon, OnlyFairVerdictsLeaveTheBandOpen)
{
  const std::vector<double> d{0, 1, 3};
  const std::vector<int> s{0, 0, 0};
  const auto fit = fit_epsilon(d, s);
  EXPECT_EQ(fit.errors, 0u);
  EXPECT_EQ(fit.lo, 3.0);
  EXPECT_TRUE(std::isinf(fit.hi));
  EXPECT_FALSE(fit.identifiable);
}

TEST(FitEpsilon, ZeroDistanceUnfairVerdictIsAlwaysAnError)
{
  // s = 1 at d = 0 contradicts every epsilon > 0.
  const std::vector<double> d{0, 0, 2};
  const std::vector<int> s{1, 0, 1};
  const auto fit = fit_epsilon(d, s);
  EXPECT_EQ(fit.errors, 1u);
  EXPECT_EQ(fit.lo, 0.0);
  EXPECT_EQ(fit.hi, 2.0);
}

TEST(FitEpsilon, RejectsBadInput)
{
  EXPECT_THROW(fit_epsilon(std::vector<double>{}, std::vector<int>{}), DataError);
  EXPECT_THROW(fit_epsilon(std::vector<double>{1.0}, std::vector<int>{}), DataError);
  EXPECT_THROW(fit_epsilon(std::vector<double>{-1.0}, std::vector<int>{0}), DataError);
  EXPECT_THROW(fit_epsilon(std::vector<double>{1.0}, std::vector<int>{2}), DataError);
}

std::size_t threshold_errors(const std::vector<double>& d, const std::vector<int>& s, double eps)
{
  std::size_t errors = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    errors += (d[i] >= eps) != (s[i] == 1) ? 1 : 0;
  }
  return errors;
}

// Against a scan of every threshold between and beyond the observed
// distances: the band is optimal, it holds the smallest optimal threshold
// and its interior really achieves the reported error count.
TEST(FitEpsilonProperty, MatchesExhaustiveThresholdScan)
{
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = 1 + rng.index(30);
    const double true_eps = 0.5 + static_cast<double>(rng.index(6));
    const double noise = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0, 0.3);
    std::vector<double> d(n);
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = static_cast<double>(rng.index(8));
      s[i] = d[i] >= true_eps ? 1 : 0;
      if (rng.uniform() < noise) {
        s[i] = 1 - s[i];
      }
    }
    std::vector<double> candidates{1e-9};
    for (int k = 0; k <= 8; ++k) {
      candidates.push_back(k + 0.5);
      candidates.push_back(k);
    }
    std::size_t best = n + 1;
    double smallest = 0.0;
    std::sort(candidates.begin(), candidates.end());
    for (const double c : candidates) {
      if (c <= 0.0) {
        continue;
      }
      const auto e = threshold_errors(d, s, c);
      if (e < best) {
        best = e;
        smallest = c;
      }
    }
    const auto fit = fit_epsilon(d, s);
    ASSERT_EQ(fit.errors, best) << "trial " << trial;
    EXPECT_GT(smallest, fit.lo) << "trial " << trial;
    EXPECT_LE(smallest, fit.hi) << "trial " << trial;
    const double inside = std::isinf(fit.hi) ? fit.lo + 1.0 : (fit.lo + fit.hi) / 2.0;
    EXPECT_EQ(threshold_errors(d, s, inside), fit.errors);
    EXPECT_EQ(threshold_errors(d, s, std::isinf(fit.hi) ? fit.lo + 100.0 : fit.hi), fit.errors);
    if (noise == 0.0 && fit.identifiable) {
      EXPECT_EQ(fit.errors, 0u);
      EXPECT_GT(true_eps, fit.lo);
      EXPECT_LE(true_eps, fit.hi);
    }
  }
}

}  // namespace
}  // namespace lam
