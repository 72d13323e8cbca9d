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


// lam-audit: one entry point for the whole pipeline.

#ifndef LAM_TOOLS_CLI_HPP_
#define LAM_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lam::cli
{

/// Stable process exit codes.
enum ExitCode : int
{
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitInternal = 4,
};

/// Every flag of every subcommand. Names mirror the model's symbols.
struct RunConfig
{
  std::string command;
  std::string data;
  std::string recipe = "compas-binary";
  std::string rule;
  double epsilon = 1.0;
  double delta = 0.05;
  double kappa = 0.0;
  double lipschitz = 1.0;
  std::string metric;  ///< empty: absolute for decile outputs, else discrete
  std::string grid = "0:0.1:0.01";
  std::uint64_t seed = 0;
  bool seed_set = false;  ///< --seed or LAM_SEED given; overrides the learner config
  std::string output;

  std::string feedback;
  std::string config_file;
  std::string task = "auto";
  double holdout = 0.0;
  std::string truth;
  std::string features;
  double tolerance = 1e-9;
  std::string listing;
  std::string complexity_g = "finite:1024";
  std::string complexity_f = "finite:1024";
  std::size_t steps = 10;
  std::string log;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> datasets;
  std::size_t subsets = 20;
  std::size_t subset_size = 50;
  bool reuse_subsets = false;
};

/// Parses and runs one command line. Reports go to the --output file, to
/// $LAM_OUTPUT_DIR/<command>.report, or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration (no environment lookups).
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lam::cli

#endif  // LAM_TOOLS_CLI_HPP_
