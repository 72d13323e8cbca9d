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


// Acceptance run: one PASS/FAIL/SKIP line per criterion with its runtime.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "report.hpp"
#include "lam/audit_service.hpp"
#include "lam/encoding.hpp"
#include "lam/judgment_log.hpp"
#include "lam/lam.hpp"
#include "lam/learning.hpp"
#include "lam/pac.hpp"
#include "lam/recipe.hpp"
#include "lam/rule.hpp"
#include "lam/similarity.hpp"
#include "lam/text.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

namespace
{

using namespace lam;
namespace fs = std::filesystem;

enum class Status
{
  kPass,
  kFail,
  kSkip,
};

struct Outcome
{
  Status status = Status::kPass;
  std::string detail;
};

Outcome pass(std::string detail) { return {Status::kPass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Status::kFail, std::move(detail)}; }
Outcome check(bool ok, std::string detail) { return {ok ? Status::kPass : Status::kFail, std::move(detail)}; }

struct Criterion
{
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v)
{
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

// ---- oracle equivalence ------------------------------------------------

Outcome oracle_equivalence()
{
  Rng rng(709);
  std::size_t compared = 0;
  std::size_t undefined = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pop = test::random_population(rng, 500);
    for (const auto notion : kAllNotions) {
      for (const auto& pair : {GroupPair{"a", "p", "q", "1", 0.0}, GroupPair{"a", "q", "r", "1", 0.0},
                               GroupPair{"a", "r", "p", "1", 0.0}}) {
        const auto got = fairness_diff(notion, pop.predictions, pop.truths, pop.table, pair);
        const auto want = test::naive_diff(notion, pop, pair);
        if (got.difference.has_value() != want.has_value()) {
          return fail("definedness differs on table " + std::to_string(trial));
        }
        if (!want) {
          ++undefined;
          continue;
        }
        if (got.difference->numerator() != want->first || got.difference->denominator() != want->second) {
          return fail("table " + std::to_string(trial) + ": " + got.difference->to_string() + " vs " +
                      std::to_string(want->first) + "/" + std::to_string(want->second));
        }
        ++compared;
      }
    }
  }
  return pass(std::to_string(compared) + " exact matches, " + std::to_string(undefined) +
              " undefined on both sides");
}

// ---- metric space ------------------------------------------------------

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n)
{
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = rng.uniform(-3, 3);
  }
  return v;
}

Eigen::MatrixXd random_pd(Rng& rng, Eigen::Index n)
{
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = rng.uniform(-1, 1);
    }
  }
  return a * a.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
}

Outcome metric_space()
{
  Rng rng(710);
  double worst_symmetry = 0.0;
  double worst_euclid = 0.0;
  double worst_slack = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng.index(8));
    const auto model = model_from_covariance(random_pd(rng, n));
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    const auto z = random_vector(rng, n);
    const double xy = mahalanobis(x, y, model);
    worst_symmetry = std::max(worst_symmetry, std::fabs(xy - mahalanobis(y, x, model)));
    worst_slack = std::min(worst_slack, xy + mahalanobis(y, z, model) - mahalanobis(x, z, model));
    const auto identity = model_from_covariance(Eigen::MatrixXd::Identity(n, n));
    worst_euclid = std::max(worst_euclid, std::fabs(mahalanobis(x, y, identity) - (x - y).norm()));
  }
  const bool ok = worst_symmetry <= 1e-12 && worst_euclid <= 1e-12 && worst_slack >= -1e-9;
  return check(ok, "max |D(x,y)-D(y,x)| " + fmt(worst_symmetry) + ", max |D_I - L2| " +
                       fmt(worst_euclid) + ", min triangle slack " + fmt(worst_slack));
}

// ---- COMPAS clusters ---------------------------------------------------

std::map<std::string, std::string> read_conf(const fs::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::map<std::string, std::string> out;
  for (std::string line; std::getline(in, line);) {
    const auto t = std::string(text::trim(line));
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const auto eq = t.find('=');
    out[std::string(text::trim(t.substr(0, eq)))] =
        eq == std::string::npos ? "" : std::string(text::trim(t.substr(eq + 1)));
  }
  return out;
}

Outcome compas_clusters()
{
  const auto conf = read_conf(fs::path(LAM_TEST_DATA_DIR) / "golden" / "compas-clusters.conf");
  const auto d = load_dataset(test::data_path(conf.at("data")), builtin_recipe(conf.at("recipe")));
  std::vector<std::string> features;
  for (const auto& f : text::split(conf.at("features"), ',')) {
    if (!text::trim(f).empty()) {
      features.emplace_back(text::trim(f));
    }
  }
  const auto encoded = one_hot_encode(d.table, features);
  const auto model = fit_covariance(encoded);
  const double tol = std::stod(conf.at("tolerance"));
  const auto clusters = build_clusters(encoded, model, tol);

  // Partition invariants, checked against the raw distances.
  const auto& x = encoded.encoded()->matrix;
  const auto row = [&](std::size_t i) -> Eigen::VectorXd {
    return x.row(static_cast<Eigen::Index>(i)).transpose();
  };
  std::vector<int> seen(encoded.rows(), 0);
  for (std::size_t c = 0; c < clusters.count(); ++c) {
    const auto& members = clusters.member_rows[c];
    if (members.empty()) {
      return fail("empty cluster " + std::to_string(c));
    }
    for (const auto m : members) {
      ++seen[m];
      if (clusters.cluster_of[m] != c) {
        return fail("cluster_of disagrees with members for row " + std::to_string(m));
      }
      if (mahalanobis(row(m), row(members.front()), model) > tol) {
        return fail("row " + std::to_string(m) + " is not at distance zero from its cluster");
      }
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; })) {
    return fail("some row is in zero or several clusters");
  }
  for (std::size_t a = 0; a < clusters.count(); ++a) {
    for (std::size_t b = a + 1; b < clusters.count(); ++b) {
      if (mahalanobis(row(clusters.member_rows[a].front()), row(clusters.member_rows[b].front()), model) <= tol) {
        return fail("clusters " + std::to_string(a) + " and " + std::to_string(b) + " should merge");
      }
    }
  }
  const auto expected = std::stoul(conf.at("expected_clusters"));
  return check(clusters.count() == expected,
               std::to_string(clusters.count()) + " clusters over " + std::to_string(encoded.rows()) +
                   " rows (target " + std::to_string(expected) + "), rank " + std::to_string(model.rank) +
                   " of " + std::to_string(model.dimension()));
}

// ---- transfer properties -----------------------------------------------

std::size_t individual_transfer_failures(Rng& rng, std::size_t instances)
{
  std::size_t failures = 0;
  for (std::size_t trial = 0; trial < instances; ++trial) {
    const auto n = 2 + rng.index(40);
    const auto table = one_hot_encode(
        test::make_table({{"u", test::random_labels(rng, n, {"a", "b", "c", "d"})},
                          {"v", test::random_labels(rng, n, {"x", "y", "z"})}}));
    const auto model = fit_covariance(table);
    const double kappa = std::vector<double>{0.0, 0.5, 1.5, 3.0}[rng.index(4)];
    const auto delta = static_cast<int>(rng.index(3));
    const auto epsilon = static_cast<int>(1 + rng.index(3));
    const auto comp = test::closeness_components(table, model, kappa);
    std::vector<int> base(n);
    for (auto& b : base) {
      b = static_cast<int>(rng.index(40));
    }
    std::vector<std::string> f(n);
    std::vector<std::string> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int fv = base[comp[i]] + static_cast<int>(rng.index(static_cast<std::uint64_t>(delta) + 1)) -
                     delta / 2;
      const int shift = static_cast<int>(rng.index(static_cast<std::uint64_t>(2 * epsilon - 1))) -
                        (epsilon - 1);
      f[i] = std::to_string(fv);
      g[i] = std::to_string(fv + shift);
    }
    const bool premise =
        individual_fairness_check(f, table, model, kappa, delta, OutputMetric::kAbsolute).fair() &&
        estimate_epsilon(g, f, OutputMetric::kAbsolute).is_epsilon_lam(epsilon);
    const auto bound = bound_individual_fair(epsilon, kappa, delta);
    const bool holds =
        individual_fairness_check(g, table, model, kappa, bound.value, OutputMetric::kAbsolute).fair();
    failures += (premise && holds) ? 0 : 1;
  }
  return failures;
}

std::size_t group_transfer_failures(Rng& rng, std::size_t instances)
{
  std::size_t failures = 0;
  std::size_t done = 0;
  while (done < instances) {
    const bool decile = rng.uniform() < 0.5;
    const auto metric = decile ? OutputMetric::kAbsolute : OutputMetric::kDiscrete;
    const std::vector<std::string> space =
        decile ? std::vector<std::string>{"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"}
               : std::vector<std::string>{"0", "1"};
    const auto n = 4 + rng.index(80);
    const auto attr = test::random_labels(rng, n, {"p", "q"});
    const auto truths = test::random_labels(rng, n, {"0", "1"});
    const auto f = test::random_labels(rng, n, space);
    auto g = f;
    const double flip = rng.uniform();
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform() < flip) {
        g[i] = test::pick(rng, space);
      }
    }
    const auto table = test::make_table({{"a", attr}, {"y", truths}});
    const auto notion = kAllNotions[rng.index(3)];
    const GroupPair pair{"a", "p", "q", "1", 0.0};
    const auto fd = fairness_diff(notion, f, truths, table, pair);
    const auto gd = fairness_diff(notion, g, truths, table, pair);
    if (fd.undefined() || gd.undefined()) {
      continue;
    }
    const double delta = std::fabs(fd.value()) + rng.uniform(1e-6, 0.1);
    const double epsilon = estimate_epsilon(g, f, metric).epsilon_hat + rng.uniform(1e-6, 1.0);
    const double m = estimate_lipschitz(notion, g, f, truths, table, pair, metric);
    failures += std::fabs(gd.value()) < bound_group(epsilon, delta, m, notion).value ? 0 : 1;
    ++done;
  }
  return failures;
}

Outcome proposition_suite()
{
  // Hand substitution, compared exactly.
  const double e = 0.125;
  const double d = 0.5;
  const double k = 1.0;
  const double m = 3.0;
  const bool formulas = bound_individual_fair(e, k, d).value == 2 * e + d &&
                        bound_individual_unfair(e, k, d).value == d - 2 * e &&
                        bound_group(e, d, m, Notion::kStatisticalParity).value == 2 * m * e + d &&
                        bound_group(e, d, m, Notion::kEqualOpportunity).value == 2 * m * e + d &&
                        bound_group(e, d, m, Notion::kCalibration).value == 2 * m * e + d;
  Rng rng(712);
  const auto individual = individual_transfer_failures(rng, 1000);
  const auto group = group_transfer_failures(rng, 1000);
  return check(formulas && individual == 0 && group == 0,
               std::string(formulas ? "bound formulas exact" : "bound formulas differ") +
                   ", individual violations " + std::to_string(individual) + "/1000, group violations " +
                   std::to_string(group) + "/1000");
}

// ---- threshold consistency over simulate -------------------------------

Outcome threshold_consistency()
{
  std::size_t judgments = 0;
  for (const auto& [recipe, rule] : std::vector<std::pair<std::string, std::string>>{
           {"compas-binary", "f1"}, {"german", "f2"}, {"adult", "f3"}}) {
    std::ostringstream out;
    std::ostringstream err;
    if (cli::run({"simulate", "--recipe", recipe, "--rule", rule}, out, err) != 0) {
      return fail("simulate " + rule + " failed: " + err.str());
    }
    std::istringstream in(out.str());
    for (const auto& rec : read_log(in)) {
      if (rec.kind != RecordKind::kJudgment) {
        continue;
      }
      ++judgments;
      if (!rec.s || !rec.distance || !rec.epsilon || (*rec.s == 1) != (*rec.distance >= *rec.epsilon)) {
        return fail(rule + ": judgment " + std::to_string(rec.seq) + " breaks the threshold rule");
      }
    }
  }
  return pass(std::to_string(judgments) + " judgments checked");
}

// ---- rule recovery -----------------------------------------------------

Outcome rule_recovery()
{
  std::string detail;
  bool ok = true;
  for (const auto& [csv, recipe, rule] : std::vector<std::array<std::string, 3>>{
           {"compas.csv", "compas-binary", "f1"}, {"german.csv", "german", "f2"}, {"adult.csv", "adult", "f3"}}) {
    const auto d = load_dataset(test::data_path(csv), builtin_recipe(recipe));
    const auto encoded = one_hot_encode(d.table);
    const auto labels = evaluate_rule(builtin_rule(rule), d.table);
    std::vector<std::size_t> order(d.table.rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(2026);
    rng.shuffle(order);
    const auto examples = [&](std::size_t from, std::size_t to) {
      const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(from),
                                          order.begin() + static_cast<std::ptrdiff_t>(to));
      std::vector<std::string> y;
      for (const auto r : rows) {
        y.push_back(labels[r]);
      }
      return make_examples(encoded, rows, y);
    };
    const auto model = train_tree(examples(0, 500));
    const double acc = evaluate_accuracy(model, examples(500, 1000));
    ok = ok && acc >= 0.95;
    detail += (detail.empty() ? "" : ", ") + rule + " " + fmt(acc);
  }
  return check(ok, "held-out tree accuracy " + detail);
}

// ---- crowd data --------------------------------------------------------

fs::path crowd_dir()
{
  if (const char* env = std::getenv("LAM_CROWD_DIR")) {
    return env;
  }
  return fs::path(LAM_TEST_DATA_DIR) / "crowd";
}

double as_double(const std::string& s) { return s == "undefined" ? std::nan("") : std::stod(s); }

Outcome crowd_reproduction()
{
  const auto feedback = crowd_dir() / "feedback.csv";
  if (!fs::exists(feedback)) {
    return {Status::kSkip, "no crowd responses at " + feedback.string() +
                               " (set LAM_CROWD_DIR to a directory holding feedback.csv)"};
  }
  std::ostringstream out;
  std::ostringstream err;
  if (cli::run({"learn", "--feedback", feedback.string(), "--task", "labels"}, out, err) != 0) {
    return fail("learn failed: " + err.str());
  }
  const auto learned = cli::parse_report(out.str());
  const auto above = std::stoul(learned.results.at("above_threshold.logistic-regression"));
  const bool band = above >= 249 - 25 && above <= 249 + 25;
  bool preference = false;
  std::string pref_detail = "no sex row";
  for (const auto& row : learned.sections.at("preference")) {
    if (row.at("attribute") == "sex") {
      const double cal = as_double(row.at("calibration"));
      const double other = as_double(row.at("other"));
      preference = std::fabs(cal - 27.5) <= 5 && std::fabs(other - 64.5) <= 5;
      pref_detail = "sex calibration " + fmt(cal) + "%, other " + fmt(other) + "%";
    }
  }

  std::ostringstream sweep_out;
  if (cli::run({"sweep", "--feedback", feedback.string()}, sweep_out, err) != 0) {
    return fail("sweep failed: " + err.str());
  }
  const auto sweep = cli::parse_report(sweep_out.str());
  bool monotone = true;
  double worst_at_zero = 0.0;
  std::map<std::string, double> last;
  for (const auto& row : sweep.sections.at("curves")) {
    const auto key = row.at("notion") + "/" + row.at("attribute") + "/" + row.at("group");
    const double frac = std::stod(row.at("fraction"));
    if (std::stod(row.at("delta")) == 0.0) {
      worst_at_zero = std::max(worst_at_zero, frac);
    } else if (last.contains(key) && frac < last[key]) {
      monotone = false;
    }
    last[key] = frac;
  }
  // "Few" is read as at most one auditor in ten.
  const bool few = worst_at_zero <= 0.1;
  return check(band && preference && monotone && few,
               std::to_string(above) + " auditors above 0.8 (target 249 +- 25), " + pref_detail +
                   ", curves " + (monotone ? "monotone" : "not monotone") + ", max fraction at delta 0 " +
                   fmt(worst_at_zero));
}

// ---- PAC calculator ----------------------------------------------------

Outcome pac_calculator()
{
  const ComponentBound g = [](double, double) -> std::uint64_t { return 300; };
  const ComponentBound f = [](double, double) -> std::uint64_t { return 700; };
  const auto grid = make_split_grid(0.1, 0.05, 10);
  const auto constant = pac_joint_budget(0.1, 0.05, g, f, grid);
  if (constant.n != 700) {
    return fail("constant component bounds gave " + std::to_string(constant.n) + ", expected 700");
  }
  for (const auto& s : grid) {
    if (!split_valid(s, 0.1, 0.05, true)) {
      return fail("grid emitted an invalid split");
    }
  }
  // Each constraint is strict.
  const bool rejects = !split_valid({0.05, 0.05, 0.0, 0.01, 0.01, 0.01}, 0.1, 0.05, false) &&
                       !split_valid({0.03, 0.03, 0.03, 1.0, 1.0, 0.05}, 0.1, 0.05, false) &&
                       !split_valid({0.03, 0.03, 0.03, 1.0, 0.01, 0.01}, 0.1, 0.05, true) &&
                       split_valid({0.03, 0.03, 0.03, 0.9, 0.9, 0.2}, 0.1, 0.05, true);
  if (!rejects) {
    return fail("split validity constraints not enforced");
  }
  std::size_t checked = 0;
  const auto h = HypothesisComplexity::finite(1024);
  const auto v = HypothesisComplexity::vc(7);
  const std::vector<double> eps{0.05, 0.1, 0.2, 0.3};
  const std::vector<double> dels{0.01, 0.05, 0.1, 0.2};
  for (std::size_t i = 0; i < eps.size(); ++i) {
    for (std::size_t j = 0; j < dels.size(); ++j) {
      const auto here = pac_joint_budget(eps[i], dels[j], h, v, make_split_grid(eps[i], dels[j], 10)).n;
      if (i + 1 < eps.size()) {
        const auto wider = pac_joint_budget(eps[i + 1], dels[j], h, v, make_split_grid(eps[i + 1], dels[j], 10)).n;
        if (wider > here) {
          return fail("budget grows with epsilon at " + fmt(eps[i]) + ", " + fmt(dels[j]));
        }
        ++checked;
      }
      if (j + 1 < dels.size()) {
        const auto looser = pac_joint_budget(eps[i], dels[j + 1], h, v, make_split_grid(eps[i], dels[j + 1], 10)).n;
        if (looser > here) {
          return fail("budget grows with delta at " + fmt(eps[i]) + ", " + fmt(dels[j]));
        }
        ++checked;
      }
    }
  }
  return pass("constant bounds give max 700, strict constraints enforced, " + std::to_string(checked) +
              " monotone steps");
}

// ---- service event sourcing -------------------------------------------

Outcome service_replay()
{
  const auto prepared = load_dataset(test::data_path("german.csv"), builtin_recipe("german"));
  ServiceConfig config;
  config.reuse_subsets = true;
  config.clock = [] { return std::string("2026-01-01T00:00:00.000Z"); };
  const auto make = [&](std::shared_ptr<JudgmentLog> log) {
    std::vector<ServiceDataset> ds{make_service_dataset("german", prepared, 20, 50, 1, 0.05)};
    return std::make_unique<AuditService>(std::move(ds), config, std::move(log));
  };
  auto live = make(std::make_shared<JudgmentLog>());
  Rng rng(717);
  test::WorkloadStats stats;
  while (live->log().size() < 10000) {
    const auto s = test::random_workload(*live, rng, 500);
    stats.operations += s.operations;
    stats.duplicates_tried += s.duplicates_tried;
    stats.duplicates_accepted += s.duplicates_accepted;
    stats.duplicates_conflict += s.duplicates_conflict;
  }
  auto replayed = make(JudgmentLog::from_text(live->log().export_text()));
  const bool exact = replayed->state_dump() == live->state_dump();

  std::map<std::string, std::set<RowId>> served;
  std::size_t double_served = 0;
  for (const auto& r : live->log().records()) {
    if (r.kind == RecordKind::kServe && !served[r.session].insert(r.row).second) {
      ++double_served;
    }
  }
  const bool duplicates_refused =
      stats.duplicates_tried > 0 && stats.duplicates_accepted == 0 && stats.duplicates_conflict == stats.duplicates_tried;
  return check(exact && double_served == 0 && duplicates_refused,
               std::to_string(live->log().size()) + " records, replay " + (exact ? "exact" : "differs") +
                   ", double serves " + std::to_string(double_served) + ", duplicates " +
                   std::to_string(stats.duplicates_conflict) + "/" + std::to_string(stats.duplicates_tried) +
                   " refused with 409");
}

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {"oracle-equivalence", 10, oracle_equivalence},
      {"metric-space", 5, metric_space},
      {"compas-clusters", 60, compas_clusters},
      {"transfer-propositions", 30, proposition_suite},
      {"threshold-consistency", 30, threshold_consistency},
      {"rule-recovery", 30, rule_recovery},
      {"crowd-reproduction", 300, crowd_reproduction},
      {"pac-calculator", 5, pac_calculator},
      {"service-event-sourcing", 30, service_replay},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("threw: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status != Status::kSkip && seconds > c.budget_seconds) {
      o.status = Status::kFail;
      o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::cout << tag << "  " << std::left << std::setw(24) << c.name << std::right << std::fixed
              << std::setprecision(2) << std::setw(8) << seconds << " s  " << o.detail << std::endl;
    std::cout.unsetf(std::ios::floatfield);
    failed += o.status == Status::kFail ? 1 : 0;
  }
  std::cout << (failed == 0 ? "all criteria met or skipped" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
