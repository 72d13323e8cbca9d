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


// Subcommand bodies. Each returns the finished report text; cli.cpp owns
// parsing, output routing and exit codes.

#ifndef LAM_TOOLS_COMMANDS_HPP_
#define LAM_TOOLS_COMMANDS_HPP_

#include <iosfwd>
#include <string>

#include "cli.hpp"

namespace lam::cli
{

std::string cmd_ingest(const RunConfig& config, std::ostream& err);
std::string cmd_metrics(const RunConfig& config, std::ostream& err);
std::string cmd_cluster(const RunConfig& config, std::ostream& err);
/// Returns a judgment log rather than a report.
std::string cmd_simulate(const RunConfig& config, std::ostream& err);
std::string cmd_learn(const RunConfig& config, std::ostream& err);
std::string cmd_bounds(const RunConfig& config, std::ostream& err);
std::string cmd_pac(const RunConfig& config, std::ostream& err);
std::string cmd_sweep(const RunConfig& config, std::ostream& err);
std::string cmd_report(const RunConfig& config, std::ostream& err);
/// Blocks until SIGINT or SIGTERM.
int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lam::cli

#endif  // LAM_TOOLS_COMMANDS_HPP_
