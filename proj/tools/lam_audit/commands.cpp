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


#include "commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "lam/audit_service.hpp"
#include "lam/encoding.hpp"
#include "lam/error.hpp"
#include "lam/feedback.hpp"
#include "lam/group_metrics.hpp"
#include "lam/http_server.hpp"
#include "lam/judgment_log.hpp"
#include "lam/lam.hpp"
#include "lam/learning.hpp"
#include "lam/pac.hpp"
#include "lam/random.hpp"
#include "lam/recipe.hpp"
#include "lam/rule.hpp"
#include "lam/similarity.hpp"
#include "lam/text.hpp"
#include "report.hpp"

#ifndef LAM_DEFAULT_DATA_DIR
#define LAM_DEFAULT_DATA_DIR "data"
#endif

namespace lam::cli
{
namespace
{

namespace fs = std::filesystem;

std::string num(double v) { return text::format_double(v); }

std::string yes_no(bool v) { return v ? "yes" : "no"; }

RecipeSpec resolve_recipe(const std::string& name)
{
  if (name.find('/') != std::string::npos || name.ends_with(".recipe")) {
    return load_recipe(name);
  }
  return builtin_recipe(name);
}

AssessmentRule resolve_rule(const std::string& name)
{
  if (name.find('/') != std::string::npos || name.ends_with(".rule")) {
    return load_rule(name);
  }
  return builtin_rule(name);
}

fs::path data_dir()
{
  if (const char* env = std::getenv("LAM_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return LAM_DEFAULT_DATA_DIR;
}

/// compas-binary reads compas.csv, german reads german.csv, and so on.
fs::path default_data_path(const RecipeSpec& recipe)
{
  return data_dir() / (recipe.name.substr(0, recipe.name.find('-')) + ".csv");
}

struct Dataset
{
  PreparedDataset prepared;
  std::string path;
};

Dataset load(const RunConfig& config, const std::string& recipe_name, std::ostream& err)
{
  Dataset d;
  const auto recipe = resolve_recipe(recipe_name);
  d.path = config.data.empty() ? default_data_path(recipe).string() : config.data;
  d.prepared = load_dataset(d.path, recipe);
  if (!d.prepared.rejected.empty()) {
    err << "lam-audit: " << d.prepared.rejected.size() << " rows of " << d.path
        << " rejected (see `lam-audit ingest`)\n";
  }
  return d;
}

Dataset load(const RunConfig& config, std::ostream& err) { return load(config, config.recipe, err); }

OutputMetric metric_for(const RunConfig& config, const OutputSpace& space)
{
  if (!config.metric.empty()) {
    return parse_output_metric(config.metric);
  }
  return space.kind() == OutputSpaceKind::kDecile ? OutputMetric::kAbsolute
                                                  : OutputMetric::kDiscrete;
}

std::vector<GroupPair> pairs_for(const PreparedDataset& d, double delta)
{
  std::vector<GroupPair> pairs;
  const auto& schema = d.table.schema();
  for (const auto& p : d.recipe.protected_attributes) {
    for (const auto& level : d.table.observed_levels(schema.index_of(p.name))) {
      if (level != p.privileged) {
        pairs.push_back({p.name, level, p.privileged, d.recipe.favorable, delta});
      }
    }
  }
  return pairs;
}

const std::vector<std::string>& system_labels(const PreparedDataset& d)
{
  if (!d.recipe.system_column) {
    throw ConfigError("recipe '" + d.recipe.name + "' names no system column");
  }
  return d.table.column(*d.recipe.system_column);
}

const std::vector<std::string>& truth_labels(const PreparedDataset& d, const RunConfig& config)
{
  if (!config.truth.empty()) {
    return d.table.column(config.truth);
  }
  const auto& outcome = d.table.schema().outcome();
  if (!outcome) {
    throw ConfigError("recipe '" + d.recipe.name + "' has no outcome column");
  }
  return d.table.column(outcome->name);
}

std::vector<std::string> rule_labels(const AssessmentRule& rule, const PreparedDataset& d)
{
  if (!(rule.output_space == d.recipe.output_space)) {
    throw ConfigError("rule '" + rule.name + "' and recipe '" + d.recipe.name +
                      "' use different output spaces");
  }
  return evaluate_rule(rule, d.table);
}

std::vector<double> parse_grid(const std::string& spec)
{
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto parts = text::split(spec, ':');
    if (parts.size() != 3) {
      throw ConfigError("grid must be lo:hi:step or a comma list");
    }
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto x = text::parse_double(parts[i]);
      if (!x) {
        throw ConfigError("bad grid value '" + parts[i] + "'");
      }
      v[i] = *x;
    }
    grid = delta_grid(v[0], v[1], v[2]);
  } else {
    for (const auto& p : text::split(spec, ',')) {
      const auto x = text::parse_double(text::trim(p));
      if (!x) {
        throw ConfigError("bad grid value '" + p + "'");
      }
      grid.push_back(*x);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1])) {
      throw ConfigError("grid values must be nonnegative and sorted");
    }
  }
  return grid;
}

HypothesisComplexity parse_complexity(const std::string& spec)
{
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto value = text::parse_double(colon == std::string::npos ? "" : spec.substr(colon + 1));
  if (!value) {
    throw ConfigError("complexity must be finite:<|H|> or vc:<d>, got '" + spec + "'");
  }
  if (kind == "finite") {
    return HypothesisComplexity::finite(*value);
  }
  if (kind == "vc") {
    return HypothesisComplexity::vc(*value);
  }
  throw ConfigError("complexity must be finite:<|H|> or vc:<d>, got '" + spec + "'");
}

void echo_dataset(Report& r, const RunConfig& config, const Dataset& d)
{
  r.config("recipe", d.prepared.recipe.name);
  r.config("data", config.data.empty() ? fs::path(d.path).filename().string() : config.data);
}

LearningConfig learning_config(const RunConfig& config)
{
  LearningConfig lc = config.config_file.empty() ? LearningConfig{}
                                                 : load_learning_config(config.config_file);
  if (config.seed_set) {
    lc.logistic.seed = lc.tree.seed = lc.svm.seed = config.seed;
  }
  return lc;
}

/// Feedback file: judgment log when the first line is JSON, CSV otherwise.
struct LoadedFeedback
{
  std::vector<FeedbackRecord> records;
  bool from_log = false;
  bool all_labelled = true;
};

LoadedFeedback load_feedback(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open feedback file " + path);
  }
  LoadedFeedback out;
  if (in.peek() == '{') {
    out.from_log = true;
    const auto records = read_log(in);
    for (const auto& r : records) {
      if (r.kind == RecordKind::kJudgment && !r.label) {
        out.all_labelled = false;
      }
    }
    out.records = feedback_from_log(records);
  } else {
    out.records = read_feedback_csv(in);
  }
  return out;
}

/// Verdict feedback: responses are s values and the system label is an
/// extra input.
std::vector<FeedbackRecord> verdicts_from_log(const std::string& path)
{
  const auto records = read_log_file(path);
  std::vector<FeedbackRecord> out;
  for (const auto& r : records) {
    if (r.kind == RecordKind::kJudgment) {
      if (!r.s) {
        throw DataError("judgment " + std::to_string(r.seq) + " has no verdict s");
      }
      out.push_back({r.auditor, r.row, std::to_string(*r.s)});
    }
  }
  return out;
}

/// Threshold fits per auditor, in first-appearance order. Judgments without
/// a recorded distance (verdict-only feedback) leave epsilon unplaced.
void epsilon_section(Report& r, const std::string& path)
{
  struct Observed
  {
    std::vector<double> distances;
    std::vector<int> verdicts;
    std::size_t judgments = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Observed> by_auditor;
  for (const auto& rec : read_log_file(path)) {
    if (rec.kind != RecordKind::kJudgment || !rec.s) {
      continue;
    }
    auto [it, inserted] = by_auditor.try_emplace(rec.auditor);
    if (inserted) {
      order.push_back(rec.auditor);
    }
    ++it->second.judgments;
    if (rec.distance) {
      it->second.distances.push_back(*rec.distance);
      it->second.verdicts.push_back(*rec.s);
    }
  }
  r.section("epsilon", {"auditor", "judgments", "with_distance", "lo", "hi", "errors", "identifiable"});
  for (const auto& name : order) {
    const auto& o = by_auditor.at(name);
    if (o.distances.empty()) {
      r.row({name, std::to_string(o.judgments), "0", "undefined", "undefined", "undefined", "no"});
      continue;
    }
    const auto fit = fit_epsilon(o.distances, o.verdicts);
    r.row({name, std::to_string(o.judgments), std::to_string(o.distances.size()), num(fit.lo),
           std::isfinite(fit.hi) ? num(fit.hi) : "inf", std::to_string(fit.errors),
           yes_no(fit.identifiable)});
  }
}

}  // namespace

std::string cmd_ingest(const RunConfig& config, std::ostream& err)
{
  const auto d = load(config, err);
  const auto& table = d.prepared.table;
  Report r("ingest");
  echo_dataset(r, config, d);
  r.result("rows", std::to_string(table.rows()));
  r.result("rejected", std::to_string(d.prepared.rejected.size()));
  r.result("columns", std::to_string(table.cols()));
  r.section("columns", {"name", "kind", "role", "levels"});
  for (std::size_t c = 0; c < table.cols(); ++c) {
    const auto& f = table.schema().features()[c];
    const auto levels = f.levels.empty() ? table.observed_levels(c) : f.levels;
    r.row({f.name, std::string(to_string(f.kind)), std::string(to_string(f.role)),
           f.kind == FeatureKind::kOrdinal ? std::to_string(levels.size()) + " values"
                                           : text::join(levels, ",")});
  }
  r.section("rejected", {"line", "reason"});
  for (const auto& rej : d.prepared.rejected) {
    r.row({std::to_string(rej.line), rej.reason});
  }
  return r.str();
}

std::string cmd_metrics(const RunConfig& config, std::ostream& err)
{
  const auto d = load(config, err);
  const auto& table = d.prepared.table;
  const auto pairs = pairs_for(d.prepared, config.delta);
  const auto& truths = truth_labels(d.prepared, config);
  std::vector<std::pair<std::string, std::vector<std::string>>> sources;
  sources.emplace_back("system", system_labels(d.prepared));
  if (!config.rule.empty()) {
    const auto rule = resolve_rule(config.rule);
    sources.emplace_back(rule.name, rule_labels(rule, d.prepared));
  }
  Report r("metrics");
  echo_dataset(r, config, d);
  r.config("rule", config.rule);
  r.config("delta", num(config.delta));
  r.result("rows", std::to_string(table.rows()));
  r.section("diffs", {"source", "notion", "attribute", "group", "reference", "difference",
                      "exact", "delta", "satisfied"});
  std::map<std::string, double> max_abs;
  for (const auto& [name, labels] : sources) {
    double worst = 0.0;
    for (const auto& pair : pairs) {
      for (const auto notion : kAllNotions) {
        const auto fr = fairness_diff(notion, labels, truths, table, pair);
        const auto record = text::split(fr.to_record(), '\t');
        std::vector<std::string> row{name};
        row.insert(row.end(), record.begin(), record.end());
        r.row(row);
        if (fr.difference) {
          worst = std::max(worst, std::fabs(fr.value()));
        }
      }
    }
    max_abs[name] = worst;
  }
  for (const auto& [name, worst] : max_abs) {
    r.result("max_abs_difference." + name, num(worst));
  }
  return r.str();
}

std::string cmd_cluster(const RunConfig& config, std::ostream& err)
{
  const auto d = load(config, err);
  std::vector<std::string> features;
  if (!config.features.empty()) {
    for (const auto& f : text::split(config.features, ',')) {
      features.emplace_back(std::string(text::trim(f)));
    }
  }
  const auto encoded = one_hot_encode(d.prepared.table, features);
  const auto model = fit_covariance(encoded);
  const auto clusters = build_clusters(encoded, model, config.tolerance);
  const auto& labels = system_labels(d.prepared);
  const auto metric = metric_for(config, d.prepared.recipe.output_space);
  const auto check = individual_fairness_check(labels, encoded, model, config.kappa, config.delta,
                                               metric, config.tolerance);

  Report r("cluster");
  echo_dataset(r, config, d);
  r.config("features", text::join(encoded.encoded()->column_names, ","));
  r.config("tolerance", num(config.tolerance));
  r.config("kappa", num(config.kappa));
  r.config("delta", num(config.delta));
  r.config("metric", std::string(to_string(metric)));
  r.result("rows", std::to_string(encoded.rows()));
  r.result("dimension", std::to_string(model.dimension()));
  r.result("rank", std::to_string(model.rank));
  r.result("clusters", std::to_string(clusters.count()));
  r.result("violations", std::to_string(check.violation_count));
  r.result("consistent_clusters", std::to_string(check.consistent_clusters));
  r.result("consistency_fraction", num(check.consistency_fraction));
  r.result("verdict", check.fair() ? "satisfies individual fairness"
                                   : "fails to satisfy individual fairness");
  r.section("clusters", {"cluster", "size", "labels", "consistent"});
  for (std::size_t c = 0; c < clusters.count(); ++c) {
    std::set<std::string, decltype(&text::label_less)> seen(&text::label_less);
    for (const auto row : clusters.member_rows[c]) {
      seen.insert(labels[row]);
    }
    const std::vector<std::string> distinct(seen.begin(), seen.end());
    bool consistent = true;
    for (const auto& a : distinct) {
      for (const auto& b : distinct) {
        consistent = consistent && output_distance(a, b, metric) <= config.delta;
      }
    }
    r.row({std::to_string(c), std::to_string(clusters.members[c].size()),
           text::join(distinct, ","), yes_no(consistent)});
  }
  if (!config.listing.empty()) {
    std::ofstream out(config.listing);
    out << clusters.to_text();
    if (!out) {
      throw DataError("cannot write cluster listing " + config.listing);
    }
  }
  return r.str();
}

std::string cmd_simulate(const RunConfig& config, std::ostream& err)
{
  if (config.rule.empty()) {
    throw ConfigError("simulate needs --rule");
  }
  const auto d = load(config, err);
  const auto rule = resolve_rule(config.rule);
  const auto& system = system_labels(d.prepared);
  const auto metric = metric_for(config, d.prepared.recipe.output_space);
  rule_labels(rule, d.prepared);  // output-space check
  const auto judgments = simulate_judgments(rule, d.prepared.table, system, config.epsilon, metric);

  // A fixed timestamp keeps the log byte-identical across runs.
  const std::string time = "1970-01-01T00:00:00.000Z";
  JudgmentLog log;
  LogRecord session;
  session.kind = RecordKind::kSession;
  session.session = "s1";
  session.auditor = rule.name;
  session.dataset = d.prepared.recipe.name;
  session.rows = d.prepared.table.ids();
  session.time = time;
  log.append(session);
  std::size_t unfair = 0;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    const auto& j = judgments[i];
    LogRecord serve;
    serve.kind = RecordKind::kServe;
    serve.session = "s1";
    serve.row = j.row;
    serve.system = j.system_label;
    serve.time = time;
    log.append(serve);
    LogRecord judged;
    judged.kind = RecordKind::kJudgment;
    judged.session = "s1";
    judged.auditor = rule.name;
    judged.row = j.row;
    judged.system = j.system_label;
    judged.label = j.intrinsic_label;
    judged.distance = j.distance;
    judged.epsilon = j.epsilon;
    judged.s = j.s;
    judged.judgment_seq = i + 1;
    judged.time = time;
    log.append(judged);
    unfair += static_cast<std::size_t>(j.s);
  }
  err << "lam-audit: simulated " << judgments.size() << " judgments, " << unfair
      << " unfair (s=1)\n";
  return log.export_text();
}

std::string cmd_learn(const RunConfig& config, std::ostream& err)
{
  if (config.feedback.empty()) {
    throw ConfigError("learn needs --feedback");
  }
  if (!(config.holdout >= 0.0 && config.holdout < 1.0)) {
    throw ConfigError("--holdout must lie in [0, 1)");
  }
  const auto d = load(config, err);
  const auto encoded = one_hot_encode(d.prepared.table);
  const auto lc = learning_config(config);

  auto loaded = load_feedback(config.feedback);
  std::string task = config.task;
  if (task == "auto") {
    task = loaded.from_log && !loaded.all_labelled ? "verdicts" : "labels";
  }
  std::optional<std::string> extra;
  if (task == "verdicts") {
    if (!loaded.from_log) {
      throw ConfigError("verdict learning needs a judgment log");
    }
    loaded.records = verdicts_from_log(config.feedback);
    system_labels(d.prepared);  // throws when the recipe has no system column
    extra = d.prepared.recipe.system_column;
  } else if (task != "labels") {
    throw ConfigError("--task must be auto, labels or verdicts");
  }
  auto feedback = group_feedback(loaded.records, encoded, extra);

  // Optional per-auditor held-out split, drawn by a seeded shuffle.
  std::vector<ExampleSet> heldout(feedback.size());
  if (config.holdout > 0.0) {
    Rng rng(lc.logistic.seed);
    for (std::size_t a = 0; a < feedback.size(); ++a) {
      auto& f = feedback[a];
      std::vector<std::size_t> order(f.examples.size());
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      const auto n_test = static_cast<std::size_t>(config.holdout * static_cast<double>(order.size()));
      std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
      std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
      std::sort(train.begin(), train.end());
      std::sort(test.begin(), test.end());
      heldout[a] = f.examples.subset(test);
      std::vector<RowId> rows;
      for (const auto i : train) {
        rows.push_back(f.rows[i]);
      }
      f.examples = f.examples.subset(train);
      f.rows = std::move(rows);
    }
  }
  const auto result = fit_all_auditors(feedback, lc);

  Report r("learn");
  echo_dataset(r, config, d);
  r.config("feedback", fs::path(config.feedback).filename().string());
  r.config("task", task);
  r.config("holdout", num(config.holdout));
  std::istringstream lines(to_text(lc));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    r.config(line.substr(0, eq), line.substr(eq + 3));
  }
  r.result("auditors", std::to_string(result.fits.size()));
  r.result("skipped", std::to_string(result.skipped.size()));
  for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
    r.result("above_threshold." + std::string(to_string(kAllFamilies[k])),
             std::to_string(result.histogram.above_threshold[k]));
  }

  std::vector<std::string> columns{"auditor", "examples", "logistic-regression", "decision-tree",
                                   "linear-svm", "best"};
  if (config.holdout > 0.0) {
    for (const auto f : kAllFamilies) {
      columns.push_back("heldout." + std::string(to_string(f)));
    }
  }
  r.section("fits", columns);
  std::map<std::string, std::size_t> feedback_index;
  for (std::size_t a = 0; a < feedback.size(); ++a) {
    feedback_index[feedback[a].auditor] = a;
  }
  for (const auto& fit : result.fits) {
    std::vector<std::string> row{fit.auditor, std::to_string(fit.examples), num(fit.accuracy[0]),
                                 num(fit.accuracy[1]), num(fit.accuracy[2]),
                                 std::string(to_string(fit.best))};
    if (config.holdout > 0.0) {
      const auto& test = heldout[feedback_index[fit.auditor]];
      for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
        row.push_back(test.size() == 0 ? "undefined" : num(evaluate_accuracy(fit.models[k], test)));
      }
    }
    r.row(row);
  }
  r.section("skipped", {"auditor", "examples"});
  for (const auto& s : result.skipped) {
    r.row({s.auditor, std::to_string(s.examples)});
  }
  r.section("histogram", {"family", "band_low", "band_high", "auditors"});
  for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
    for (std::size_t b = 0; b < 10; ++b) {
      r.row({std::string(to_string(kAllFamilies[k])), num(static_cast<double>(b) / 10.0),
             num(static_cast<double>(b + 1) / 10.0),
             std::to_string(result.histogram.counts[k][b])});
    }
  }
  if (loaded.from_log) {
    epsilon_section(r, config.feedback);
  }
  if (task == "labels" && d.prepared.table.schema().outcome()) {
    const auto pairs = pairs_for(d.prepared, lc.notion_delta);
    const auto truth = config.truth.empty() ? d.prepared.table.schema().outcome()->name : config.truth;
    // One row per attribute: compare every unprivileged level in turn and
    // report each pair separately.
    r.section("preference", {"attribute", "group", "reference", "auditors", "statistical-parity",
                             "equal-opportunity", "calibration", "other"});
    for (const auto& pair : pairs) {
      const auto rows = notion_preference(result.fits, feedback, d.prepared.table,
                                          std::span<const GroupPair>(&pair, 1), truth, lc);
      const auto& p = rows.front();
      r.row({pair.attribute, pair.group, pair.reference, std::to_string(p.auditors),
             num(p.percent[0]), num(p.percent[1]), num(p.percent[2]), num(p.percent[3])});
    }
  }
  return r.str();
}

std::string cmd_bounds(const RunConfig& config, std::ostream& err)
{
  Report r("bounds");
  r.config("epsilon", num(config.epsilon));
  r.config("delta", num(config.delta));
  r.config("kappa", num(config.kappa));
  r.config("lipschitz", num(config.lipschitz));
  r.config("rule", config.rule);
  std::vector<BoundResult> bounds{bound_individual_fair(config.epsilon, config.kappa, config.delta),
                                  bound_individual_unfair(config.epsilon, config.kappa, config.delta)};
  for (const auto notion : kAllNotions) {
    bounds.push_back(bound_group(config.epsilon, config.delta, config.lipschitz, notion));
  }
  r.section("bounds", {"notion", "epsilon", "delta", "kappa", "M", "bound", "degenerate"});
  for (const auto& b : bounds) {
    r.row({b.notion, num(b.epsilon), num(b.delta), num(b.kappa), num(b.lipschitz), num(b.value),
           yes_no(b.degenerate)});
  }
  if (!config.rule.empty()) {
    const auto d = load(config, err);
    echo_dataset(r, config, d);
    const auto rule = resolve_rule(config.rule);
    const auto& system = system_labels(d.prepared);
    const auto intrinsic = rule_labels(rule, d.prepared);
    const auto metric = metric_for(config, d.prepared.recipe.output_space);
    const auto estimate = estimate_epsilon(system, intrinsic, metric);
    r.result("epsilon_hat", num(estimate.epsilon_hat));
    r.result("is_epsilon_lam", yes_no(estimate.is_epsilon_lam(config.epsilon)));
    r.section("distances", {"distance", "rows"});
    for (const auto& [dist, count] : estimate.histogram) {
      r.row({num(dist), std::to_string(count)});
    }
    r.section("lipschitz", {"notion", "attribute", "group", "reference", "M", "bound"});
    const auto& truths = truth_labels(d.prepared, config);
    for (const auto& pair : pairs_for(d.prepared, config.delta)) {
      for (const auto notion : kAllNotions) {
        try {
          const double m = estimate_lipschitz(notion, system, intrinsic, truths, d.prepared.table,
                                              pair, metric);
          r.row({std::string(to_string(notion)), pair.attribute, pair.group, pair.reference, num(m),
                 num(bound_group(config.epsilon, config.delta, m, notion).value)});
        } catch (const DataError&) {
          r.row({std::string(to_string(notion)), pair.attribute, pair.group, pair.reference,
                 "undefined", "undefined"});
        }
      }
    }
  }
  return r.str();
}

std::string cmd_pac(const RunConfig& config, std::ostream&)
{
  const auto g = parse_complexity(config.complexity_g);
  const auto f = parse_complexity(config.complexity_f);
  const auto grid = make_split_grid(config.epsilon, config.delta, config.steps);
  const auto budget = pac_joint_budget(config.epsilon, config.delta, g, f, grid);
  Report r("pac");
  r.config("epsilon", num(config.epsilon));
  r.config("delta", num(config.delta));
  r.config("complexity_g", g.to_string());
  r.config("complexity_f", f.to_string());
  r.config("steps", std::to_string(config.steps));
  r.result("n", std::to_string(budget.n));
  r.result("n_g", std::to_string(budget.n_g));
  r.result("n_f", std::to_string(budget.n_f));
  r.result("candidates", std::to_string(grid.size()));
  r.result("infeasible", std::to_string(budget.infeasible));
  r.section("split", {"epsilon_g", "epsilon_f", "epsilon_ncf", "delta_g", "delta_f", "delta_ncf"});
  const auto& s = budget.split;
  r.row({num(s.epsilon_g), num(s.epsilon_f), num(s.epsilon_ncf), num(s.delta_g), num(s.delta_f),
         num(s.delta_ncf)});
  return r.str();
}

std::string cmd_sweep(const RunConfig& config, std::ostream& err)
{
  const auto d = load(config, err);
  const auto grid = parse_grid(config.grid);
  const auto& table = d.prepared.table;
  const auto& truths = truth_labels(d.prepared, config);

  // Each auditor contributes its responses on its own rows.
  struct Auditor
  {
    std::string name;
    std::vector<std::size_t> rows;
    std::vector<std::string> labels;
  };
  std::vector<Auditor> auditors;
  std::string source = "system";
  if (!config.feedback.empty()) {
    source = fs::path(config.feedback).filename().string();
    const auto loaded = load_feedback(config.feedback);
    std::map<std::string, std::size_t> index;
    for (const auto& rec : loaded.records) {
      const auto row = table.row_index(rec.row);
      if (!row) {
        throw DataError("feedback names unknown row " + std::to_string(rec.row));
      }
      auto [it, inserted] = index.try_emplace(rec.auditor, auditors.size());
      if (inserted) {
        auditors.push_back({rec.auditor, {}, {}});
      }
      auditors[it->second].rows.push_back(*row);
      auditors[it->second].labels.push_back(rec.response);
    }
  } else {
    Auditor a;
    if (!config.rule.empty()) {
      const auto rule = resolve_rule(config.rule);
      source = rule.name;
      a.labels = rule_labels(rule, d.prepared);
    } else {
      a.labels = system_labels(d.prepared);
    }
    a.name = source;
    a.rows.resize(table.rows());
    std::iota(a.rows.begin(), a.rows.end(), 0);
    auditors.push_back(std::move(a));
  }

  Report r("sweep");
  echo_dataset(r, config, d);
  r.config("source", source);
  r.config("grid", config.grid);
  r.result("auditors", std::to_string(auditors.size()));
  r.section("curves", {"notion", "attribute", "group", "reference", "delta", "satisfied", "total",
                       "fraction"});
  for (const auto& pair : pairs_for(d.prepared, 0.0)) {
    for (const auto notion : kAllNotions) {
      std::vector<FairnessReport> reports;
      for (const auto& a : auditors) {
        const auto subset = table.select_rows(a.rows);
        std::vector<std::string> t;
        for (const auto row : a.rows) {
          t.push_back(truths[row]);
        }
        reports.push_back(fairness_diff(notion, a.labels, t, subset, pair));
      }
      for (const auto& point : sweep_delta(reports, grid)) {
        r.row({std::string(to_string(notion)), pair.attribute, pair.group, pair.reference,
               num(point.delta), std::to_string(point.satisfied), std::to_string(point.total),
               num(point.fraction)});
      }
    }
  }
  return r.str();
}

namespace
{

std::vector<ServiceDataset> service_datasets(const RunConfig& config, std::ostream& err)
{
  auto names = config.datasets;
  if (names.empty()) {
    names.push_back(config.recipe);
  }
  if (names.size() > 1 && !config.data.empty()) {
    throw ConfigError("--data applies to a single dataset; drop it to use the defaults");
  }
  std::vector<ServiceDataset> out;
  for (const auto& name : names) {
    const auto d = load(config, name, err);
    out.push_back(make_service_dataset(d.prepared.recipe.name, d.prepared, config.subsets,
                                       config.subset_size, config.seed, config.delta));
  }
  return out;
}

std::atomic<AuditHttpServer*> g_server{nullptr};

extern "C" void stop_server(int)
{
  if (auto* s = g_server.load()) {
    s->stop();
  }
}

}  // namespace

std::string cmd_report(const RunConfig& config, std::ostream& err)
{
  if (config.log.empty()) {
    throw ConfigError("report needs --log");
  }
  std::ifstream in(config.log);
  if (!in) {
    throw DataError("cannot open judgment log " + config.log);
  }
  std::ostringstream text;
  text << in.rdbuf();
  std::shared_ptr<JudgmentLog> log = JudgmentLog::from_text(text.str());

  RunConfig effective = config;
  if (effective.datasets.empty()) {
    std::set<std::string> names;
    for (const auto& rec : log->records()) {
      if (rec.kind == RecordKind::kSession) {
        names.insert(rec.dataset);
      }
    }
    effective.datasets.assign(names.begin(), names.end());
  }
  ServiceConfig sc;
  sc.learning = learning_config(config);
  AuditService service(service_datasets(effective, err), sc, log);

  Report r("report");
  r.config("log", fs::path(config.log).filename().string());
  r.result("sessions", std::to_string(service.sessions().size()));
  r.result("records", std::to_string(log->size()));
  r.section("sessions", {"session", "auditor", "dataset", "judged", "report"});
  for (const auto& s : service.sessions()) {
    r.row({s.id, s.auditor, s.dataset, std::to_string(s.judged), service.session_report(s.id)});
  }
  return r.str();
}

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err)
{
  const auto log_path = config.log.empty() ? std::string("judgments.log") : config.log;
  auto log = std::make_shared<JudgmentLog>(log_path);
  ServiceConfig sc;
  sc.reuse_subsets = config.reuse_subsets;
  sc.learning = learning_config(config);
  AuditService service(service_datasets(config, err), sc, log);
  AuditHttpServer server(service);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    throw ConfigError("cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  out << "lam-audit: serving " << text::join(service.dataset_names(), ",") << " on http://"
      << config.host << ':' << port << " (log " << log_path << ", " << log->size()
      << " records replayed)" << std::endl;
  server.listen();
  g_server = nullptr;
  out << "lam-audit: stopped" << std::endl;
  return kExitOk;
}

}  // namespace lam::cli
