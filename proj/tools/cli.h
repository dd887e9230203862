// Copyright 2026 The fgaudit Authors
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

#ifndef FGAUDIT_TOOLS_CLI_H_
#define FGAUDIT_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fgaudit/possible_worlds.h"

namespace fgaudit::cli {

// Every option of every subcommand, with its default.
struct RunConfig {
  std::string command;

  // Schema designation; flags override the config file.
  std::string config_path;
  std::vector<std::string> qi;
  std::string sensitive_attr;
  std::vector<std::string> sensitive_values;
  std::string missing_marker;

  // Inputs and output.
  std::string table;
  std::string qi_file;
  std::string sensitive_file;
  std::string original;
  std::string knowledge;
  std::string out;

  // anonymize
  int l = 2;
  std::string strategy = "anatomy";

  // mine
  double epsilon = 0.01;
  double sigma = 0.9;
  std::size_t min_support = 0;  // 0: derive from epsilon and sigma
  std::size_t max_set_size = 3;
  std::string method = "newton";
  double tol = 1e-8;
  int max_iter = 200;

  // audit
  double r = 2.0;
  bool allow_base_rate_only = false;

  // query-error
  std::size_t qd = 0;  // 0: every QI attribute
  double selectivity = 0.05;
  std::size_t queries = 10000;

  std::uint64_t world_cap = kDefaultWorldCap;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Runs the command line; returns the process exit status. Data goes to `out`
// (or the --out file), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fgaudit::cli

#endif  // FGAUDIT_TOOLS_CLI_H_
