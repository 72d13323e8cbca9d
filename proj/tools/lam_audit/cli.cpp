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


#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "lam/error.hpp"
#include "lam/text.hpp"

namespace lam::cli
{
namespace
{

void add_dataset_options(CLI::App* cmd, RunConfig& c)
{
  cmd->add_option("--data", c.data, "CSV file (default: the recipe's file under $LAM_DATA_DIR)");
  cmd->add_option("--recipe", c.recipe, "Builtin recipe name or .recipe file")
      ->capture_default_str();
}

void add_output_option(CLI::App* cmd, RunConfig& c)
{
  cmd->add_option("-o,--output", c.output, "Write the report here instead of stdout");
}

void add_seed_option(CLI::App* cmd, RunConfig& c)
{
  cmd->add_option("--seed", c.seed, "Seed for every random draw")->capture_default_str();
}

std::string output_extension(const std::string& command)
{
  return command == "simulate" ? ".log" : ".report";
}

void write_file(const std::string& path, const std::string& contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.flush();
  if (!out) {
    throw DataError("cannot write " + path);
  }
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err)
{
  try {
    if (config.command == "serve") {
      return cmd_serve(config, out, err);
    }
    std::string result;
    const auto& c = config.command;
    if (c == "ingest") {
      result = cmd_ingest(config, err);
    } else if (c == "metrics") {
      result = cmd_metrics(config, err);
    } else if (c == "cluster") {
      result = cmd_cluster(config, err);
    } else if (c == "simulate") {
      result = cmd_simulate(config, err);
    } else if (c == "learn") {
      result = cmd_learn(config, err);
    } else if (c == "bounds") {
      result = cmd_bounds(config, err);
    } else if (c == "pac") {
      result = cmd_pac(config, err);
    } else if (c == "sweep") {
      result = cmd_sweep(config, err);
    } else if (c == "report") {
      result = cmd_report(config, err);
    } else {
      throw ConfigError("unknown command '" + c + "'");
    }
    if (config.output.empty()) {
      out << result;
    } else {
      write_file(config.output, result);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "lam-audit: error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "lam-audit: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "lam-audit: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  RunConfig c;
  CLI::App app{"Fairness auditing with latent assessment models", "lam-audit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lam-audit 0.1.0");

  auto* ingest = app.add_subcommand("ingest", "Load a dataset and list rejected rows");
  add_dataset_options(ingest, c);
  add_output_option(ingest, c);

  auto* metrics = app.add_subcommand("metrics", "Group fairness differences");
  add_dataset_options(metrics, c);
  add_output_option(metrics, c);
  metrics->add_option("--rule", c.rule, "Also score an assessment rule");
  metrics->add_option("--delta", c.delta, "Tolerance for the satisfied column")
      ->capture_default_str();
  metrics->add_option("--truth", c.truth, "Ground-truth column (default: the outcome)");

  auto* cluster = app.add_subcommand("cluster", "Zero-distance clusters and individual fairness");
  add_dataset_options(cluster, c);
  add_output_option(cluster, c);
  cluster->add_option("--features", c.features, "Comma-separated input features");
  cluster->add_option("--tolerance", c.tolerance, "Zero-distance tolerance")
      ->capture_default_str();
  cluster->add_option("--kappa", c.kappa, "Input distance threshold")->capture_default_str();
  cluster->add_option("--delta", c.delta, "Output distance threshold")->capture_default_str();
  cluster->add_option("--metric", c.metric, "discrete or absolute");
  cluster->add_option("--listing", c.listing, "Write the row_id/cluster_id listing here");

  auto* simulate = app.add_subcommand("simulate", "Judgments of a rule-following auditor");
  add_dataset_options(simulate, c);
  add_output_option(simulate, c);
  simulate->add_option("--rule", c.rule, "Assessment rule")->required();
  simulate->add_option("--epsilon", c.epsilon, "Unfairness threshold")->capture_default_str();
  simulate->add_option("--metric", c.metric, "discrete or absolute");

  auto* learn = app.add_subcommand("learn", "Fit auditor models from feedback");
  add_dataset_options(learn, c);
  add_output_option(learn, c);
  add_seed_option(learn, c);
  learn->add_option("--feedback", c.feedback, "Feedback CSV or judgment log")->required();
  learn->add_option("--config", c.config_file, "Learner configuration file");
  learn->add_option("--task", c.task, "auto, labels or verdicts")->capture_default_str();
  learn->add_option("--holdout", c.holdout, "Held-out fraction per auditor")
      ->capture_default_str();
  learn->add_option("--truth", c.truth, "Ground-truth column (default: the outcome)");

  auto* bounds = app.add_subcommand("bounds", "Fairness transfer bounds");
  add_dataset_options(bounds, c);
  add_output_option(bounds, c);
  bounds->add_option("--epsilon", c.epsilon, "LAM threshold")->capture_default_str();
  bounds->add_option("--delta", c.delta, "Fairness tolerance of the system")
      ->capture_default_str();
  bounds->add_option("--kappa", c.kappa, "Input distance threshold")->capture_default_str();
  bounds->add_option("--lipschitz", c.lipschitz, "Lipschitz constant M")->capture_default_str();
  bounds->add_option("--rule", c.rule, "Estimate epsilon and M against this rule");
  bounds->add_option("--metric", c.metric, "discrete or absolute");
  bounds->add_option("--truth", c.truth, "Ground-truth column (default: the outcome)");

  auto* pac = app.add_subcommand("pac", "Joint sample budget");
  add_output_option(pac, c);
  pac->add_option("--epsilon", c.epsilon, "Accuracy")->capture_default_str();
  pac->add_option("--delta", c.delta, "Confidence")->capture_default_str();
  pac->add_option("--complexity-g", c.complexity_g, "finite:<|H|> or vc:<d>")
      ->capture_default_str();
  pac->add_option("--complexity-f", c.complexity_f, "finite:<|H|> or vc:<d>")
      ->capture_default_str();
  pac->add_option("--steps", c.steps, "Split grid resolution")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Fraction of auditors satisfied per delta");
  add_dataset_options(sweep, c);
  add_output_option(sweep, c);
  sweep->add_option("--grid", c.grid, "lo:hi:step or a comma list")->capture_default_str();
  sweep->add_option("--feedback", c.feedback, "Feedback CSV or judgment log");
  sweep->add_option("--rule", c.rule, "Sweep a rule instead of the system");
  sweep->add_option("--truth", c.truth, "Ground-truth column (default: the outcome)");

  auto* serve = app.add_subcommand("serve", "Run the audit HTTP service");
  add_dataset_options(serve, c);
  add_seed_option(serve, c);
  serve->add_option("--datasets", c.datasets, "Recipe names to serve")->delimiter(',');
  serve->add_option("--log", c.log, "Judgment log (created if missing)");
  serve->add_option("--host", c.host, "Bind address")->capture_default_str();
  serve->add_option("--port", c.port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--subsets", c.subsets, "Subsets per dataset")->capture_default_str();
  serve->add_option("--subset-size", c.subset_size, "Rows per subset")->capture_default_str();
  serve->add_option("--delta", c.delta, "Tolerance for the notion flags")->capture_default_str();
  serve->add_option("--config", c.config_file, "Learner configuration file");
  serve->add_flag("--reuse-subsets", c.reuse_subsets, "Let auditors see a subset twice");

  auto* report = app.add_subcommand("report", "Session reports from a judgment log");
  add_output_option(report, c);
  add_seed_option(report, c);
  report->add_option("--log", c.log, "Judgment log")->required();
  report->add_option("--datasets", c.datasets, "Recipe names (default: those in the log)")
      ->delimiter(',');
  report->add_option("--subsets", c.subsets, "Subsets per dataset")->capture_default_str();
  report->add_option("--subset-size", c.subset_size, "Rows per subset")->capture_default_str();
  report->add_option("--delta", c.delta, "Tolerance for the notion flags")->capture_default_str();
  report->add_option("--config", c.config_file, "Learner configuration file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help surfaces as CallForHelp from the subcommand itself.
    if (e.get_exit_code() == 0) {
      const auto subs = app.get_subcommands();
      out << (subs.empty() ? app.help() : subs.front()->help());
      return kExitOk;
    }
    err << "lam-audit: error: " << e.what() << '\n';
    return kExitConfig;
  }

  c.command = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  const bool has_seed_option = sub->get_option_no_throw("--seed") != nullptr;
  if (has_seed_option && sub->count("--seed") > 0) {
    c.seed_set = true;
  } else if (const char* env = std::getenv("LAM_SEED"); env != nullptr && *env != '\0') {
    const auto seed = text::parse_int(env);
    if (!seed || *seed < 0) {
      err << "lam-audit: error: LAM_SEED must be a nonnegative integer\n";
      return kExitConfig;
    }
    c.seed = static_cast<std::uint64_t>(*seed);
    c.seed_set = true;
  }
  if (c.output.empty() && c.command != "serve") {
    if (const char* dir = std::getenv("LAM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      c.output = (std::filesystem::path(dir) / (c.command + output_extension(c.command))).string();
    }
  }
  return execute(c, out, err);
}

}  // namespace lam::cli
